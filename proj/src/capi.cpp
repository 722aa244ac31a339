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


#include "reident/reident.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <iostream>
#include <memory>
#include <new>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "reident/dtw.hpp"
#include "reident/error.hpp"
#include "reident/harness.hpp"
#include "reident/ingest.hpp"

struct reid_dataset {
  std::vector<reident::SubjectRecord> records;
};

namespace {

thread_local std::string g_last_error;

reid_status Fail(reid_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
reid_status Guard(Fn&& fn) {
  g_last_error.clear();
  try {
    return fn();
  } catch (const reident::IngestError& e) {
    return Fail(REID_ERR_INGEST, e.what());
  } catch (const reident::ConfigError& e) {
    return Fail(REID_ERR_CONFIG, e.what());
  } catch (const reident::PreprocessError& e) {
    return Fail(REID_ERR_EVAL, e.what());
  } catch (const reident::DtwError& e) {
    return Fail(REID_ERR_EVAL, e.what());
  } catch (const reident::EvalError& e) {
    return Fail(REID_ERR_EVAL, e.what());
  } catch (const nlohmann::json::exception& e) {
    return Fail(REID_ERR_CONFIG, std::string("invalid JSON: ") + e.what());
  } catch (const std::bad_alloc&) {
    return Fail(REID_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(REID_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(REID_ERR_INTERNAL, "unknown error");
  }
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* reid_version(void) { return "1.0.0"; }

const char* reid_last_error(void) { return g_last_error.c_str(); }

reid_status reid_dataset_load(const char* dir, reid_dataset** out) {
  if (dir == nullptr || out == nullptr) return Fail(REID_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return Guard([&] {
    auto ds = std::make_unique<reid_dataset>();
    ds->records = reident::LoadDataset(reident::ReadManifest(dir));
    *out = ds.release();
    return REID_OK;
  });
}

reid_status reid_dataset_synthesize(uint32_t n_subjects, double duration_s,
                                    uint64_t seed, double separability,
                                    reid_dataset** out) {
  if (out == nullptr) return Fail(REID_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return Guard([&] {
    reident::SyntheticConfig config;
    config.n_subjects = n_subjects;
    config.duration_s = duration_s;
    config.seed = seed;
    config.separability = separability;
    auto ds = std::make_unique<reid_dataset>();
    ds->records = reident::GenerateSynthetic(config);
    *out = ds.release();
    return REID_OK;
  });
}

reid_status reid_dataset_write(const reid_dataset* dataset, const char* dir) {
  if (dataset == nullptr || dir == nullptr) return Fail(REID_ERR_ARGUMENT, "null argument");
  return Guard([&] {
    reident::WriteDataset(dataset->records, dir);
    return REID_OK;
  });
}

size_t reid_dataset_size(const reid_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->records.size();
}

reid_status reid_dataset_subject_id(const reid_dataset* dataset, size_t index,
                                    const char** out) {
  if (dataset == nullptr || out == nullptr) return Fail(REID_ERR_ARGUMENT, "null argument");
  if (index >= dataset->records.size()) return Fail(REID_ERR_ARGUMENT, "index out of range");
  *out = dataset->records[index].subject_id.c_str();
  return REID_OK;
}

reid_status reid_dataset_validate(const reid_dataset* dataset, size_t* n_problems) {
  if (dataset == nullptr || n_problems == nullptr) {
    return Fail(REID_ERR_ARGUMENT, "null argument");
  }
  return Guard([&] {
    size_t n = 0;
    for (const auto& r : dataset->records) n += reident::ValidateSubject(r).size();
    *n_problems = n;
    return REID_OK;
  });
}

void reid_dataset_free(reid_dataset* dataset) { delete dataset; }

reid_status reid_dtw_distance(const double* x, size_t n, const double* y,
                              size_t m, const char* step_pattern,
                              int path_normalized, int64_t band, double* out) {
  if (x == nullptr || y == nullptr || step_pattern == nullptr || out == nullptr) {
    return Fail(REID_ERR_ARGUMENT, "null argument");
  }
  return Guard([&] {
    reident::DtwConfig config;
    const auto pattern = reident::ParseStepPattern(step_pattern);
    if (!pattern) {
      throw reident::ConfigError(std::string("unknown step pattern: ") + step_pattern);
    }
    config.step_pattern = *pattern;
    config.normalization = path_normalized
                               ? reident::DistanceNormalization::kPathNormalized
                               : reident::DistanceNormalization::kNone;
    if (band >= 0) config.band = static_cast<std::size_t>(band);
    *out = reident::DtwDistance(std::span<const double>(x, n),
                                std::span<const double>(y, m), config);
    return REID_OK;
  });
}

reid_status reid_run(const char* command, const char* config_json, int verbose,
                     char** result_json) {
  if (command == nullptr || config_json == nullptr) {
    return Fail(REID_ERR_ARGUMENT, "null argument");
  }
  if (result_json != nullptr) *result_json = nullptr;
  return Guard([&] {
    const std::string cmd = command;
    const reident::RunConfig config =
        reident::RunConfigFromJson(nlohmann::json::parse(config_json));
    std::ostream* log = verbose ? &std::cerr : nullptr;
    nlohmann::ordered_json result;
    reid_status status = REID_OK;
    if (cmd == "attack") {
      reident::CmdAttack(config, log);
    } else if (cmd == "sweep") {
      reident::CmdSweep(config, log);
    } else if (cmd == "optimize") {
      reident::CmdOptimize(config, log);
    } else if (cmd == "heatmap") {
      reident::CmdHeatmap(config, log);
    } else if (cmd == "synth") {
      reident::CmdSynth(config, log);
    } else if (cmd == "validate") {
      const auto problems = reident::CmdValidate(config);
      result["problems"] = problems;
      if (!problems.empty()) {
        status = Fail(REID_ERR_INGEST, std::to_string(problems.size()) +
                                           " problem(s) found; first: " +
                                           problems.front());
      }
    } else {
      throw reident::ConfigError("unknown command: '" + cmd + "'");
    }
    if (cmd != "validate") result = reident::ToJson(reident::Resolve(config, cmd));
    if (result_json != nullptr) *result_json = CopyString(result.dump(2));
    return status;
  });
}

void reid_string_free(char* s) { std::free(s); }

}  // extern "C"
