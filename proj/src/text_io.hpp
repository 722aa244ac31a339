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

#ifndef REIDENT_SRC_TEXT_IO_HPP_
#define REIDENT_SRC_TEXT_IO_HPP_

#include <charconv>
#include <string>
#include <string_view>

namespace reident::textio {

// Shortest decimal that parses back to the same double.
inline void AppendDouble(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

inline std::string FormatDouble(double v) {
  std::string s;
  AppendDouble(s, v);
  return s;
}

// Whole field must be consumed.
inline bool ParseDouble(std::string_view text, double& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace reident::textio

#endif  // REIDENT_SRC_TEXT_IO_HPP_
