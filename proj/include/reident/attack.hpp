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

#ifndef REIDENT_ATTACK_HPP_
#define REIDENT_ATTACK_HPP_

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "reident/core.hpp"
#include "reident/dtw.hpp"
#include "reident/preprocess.hpp"

namespace reident {

struct ScoreRow {
  std::string handle;
  // Indexed by Index(Sensor).
  std::array<double, kNumSensors> similarity{};

  double operator[](Sensor s) const { return similarity[Index(s)]; }
  bool operator==(const ScoreRow&) const = default;
};

// Per-candidate, per-sensor similarities for one attack. Rows are sorted by
// handle and every collection handle appears exactly once.
struct ScoreTable {
  std::string target_id;
  std::vector<ScoreRow> rows;
  // Candidates that could not be scored (e.g. no data of the filter class).
  std::vector<std::string> warnings;

  const ScoreRow* Find(const std::string& handle) const;
  bool operator==(const ScoreTable&) const = default;
};

// Scores every candidate against the attacker snippet: similarity of the DTW
// distance for BVP/EDA/TEMP and of the axis-averaged distance for ACC. When
// the instance carries a candidate class, each candidate is first reduced to
// its samples of that class; a candidate with none scores 0 everywhere.
ScoreTable RunAttack(const AttackInstance& instance, const DtwConfig& config,
                     std::size_t threads = 0);

// JSON array of {"target", "warnings", "rows": [{"handle", "BVP", ...}]}.
void WriteScoreTablesJson(const std::vector<ScoreTable>& tables,
                          std::ostream& out);
// Long format: target,handle,sensor,similarity.
void WriteScoreTablesCsv(const std::vector<ScoreTable>& tables,
                         std::ostream& out);

}  // namespace reident

#endif  // REIDENT_ATTACK_HPP_
