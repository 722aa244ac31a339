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


#ifndef REIDENT_HARNESS_HPP_
#define REIDENT_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "reident/core.hpp"
#include "reident/dtw.hpp"
#include "reident/eval.hpp"
#include "reident/ingest.hpp"
#include "reident/preprocess.hpp"
#include "reident/ranking.hpp"

namespace reident {

struct WeightSpec {
  enum class Mode { kEqual, kSensors, kExplicit, kGrid };
  Mode mode = Mode::kEqual;
  std::vector<Sensor> sensors;  // kSensors
  WeightVector values;          // kExplicit

  // Throws ConfigError for kGrid, which has no fixed vector.
  WeightVector Resolve() const;
};

std::string_view ToString(WeightSpec::Mode m);

// Everything a command needs. Serialises to JSON; the resolved form is
// written next to the results and reproduces them when fed back in.
struct RunConfig {
  std::string data_dir;
  std::optional<SyntheticConfig> synthetic;
  // False until the synthetic seed is fixed, either explicitly or by
  // derivation from the global seed.
  bool synthetic_seed_set = false;

  PreprocessConfig preprocess;
  DtwConfig dtw;
  RankingMethod method = RankingMethod::kScore;
  ClassPolicy class_policy;
  ClassFilterSide filter_side = ClassFilterSide::kBoth;
  WeightSpec weights;
  // nullopt: the command's default (one tiny snippet, or the five standard
  // sizes for the size sweep).
  std::optional<std::vector<double>> fractions;

  // sweep: any of sensors, sizes, methods, classes.
  std::vector<std::string> sweep_kinds = {"sensors", "sizes"};
  // optimize, and attack with grid weights.
  double grid_step = 0.1;
  std::vector<std::size_t> objective_ks = {1, 3, 5};
  // heatmap: seconds cut from the middle of each record; 0 keeps it whole.
  double heatmap_segment_s = 10.0;

  std::string output_dir = "reident_out";
  std::uint64_t seed = 0;
  std::size_t threads = 0;
};

nlohmann::ordered_json ToJson(const RunConfig& config);
// Missing keys keep their defaults. Throws ConfigError.
RunConfig RunConfigFromJson(const nlohmann::json& doc);
RunConfig ReadRunConfig(const std::filesystem::path& path);

// Fills in derived values (synthetic seed, default fractions, data dir from
// REIDENT_DATA_DIR) and validates. Throws ConfigError.
RunConfig Resolve(RunConfig config, std::string_view command);

// Each command resolves its config, writes run_config.json and its result
// files to output_dir, and logs progress to `log` when non-null. Library
// exceptions propagate.
void CmdAttack(const RunConfig& config, std::ostream* log = nullptr);
void CmdSweep(const RunConfig& config, std::ostream* log = nullptr);
void CmdOptimize(const RunConfig& config, std::ostream* log = nullptr);
void CmdHeatmap(const RunConfig& config, std::ostream* log = nullptr);
// Writes the synthetic dataset (manifest + CSVs) to output_dir.
void CmdSynth(const RunConfig& config, std::ostream* log = nullptr);
// Loads the dataset and returns every problem found; empty means clean.
// Ingest errors are reported, not thrown.
std::vector<std::string> CmdValidate(const RunConfig& config);

}  // namespace reident

#endif  // REIDENT_HARNESS_HPP_
