// Copyright 2026 The reident Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef REIDENT_ERROR_HPP_
#define REIDENT_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace reident {

// Root of every exception the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IngestError : public Error {
 public:
  explicit IngestError(const std::string& message) : Error(message) {}
  IngestError(const std::string& path, const std::string& message)
      : Error(path + ": " + message), path_(path) {}
  IngestError(const std::string& path, std::size_t line,
              const std::string& message)
      : Error(path + ":" + std::to_string(line) + ": " + message),
        path_(path),
        line_(line) {}

  const std::string& path() const { return path_; }
  // 1-based; 0 when the error is not tied to a line.
  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::size_t line_ = 0;
};

class PreprocessError : public Error {
 public:
  using Error::Error;
};

class DtwError : public Error {
 public:
  using Error::Error;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

// Invalid user-supplied configuration (bad flag values, weights, steps).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace reident

#endif  // REIDENT_ERROR_HPP_
