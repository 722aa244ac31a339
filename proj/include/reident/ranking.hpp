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

#ifndef REIDENT_RANKING_HPP_
#define REIDENT_RANKING_HPP_

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reident/attack.hpp"
#include "reident/core.hpp"

namespace reident {

// kScore ranks by the weighted mean similarity (higher is better); kRank
// ranks every sensor separately and orders by the weighted mean rank (lower
// is better).
enum class RankingMethod { kScore, kRank };

std::string_view ToString(RankingMethod m);
std::optional<RankingMethod> ParseRankingMethod(std::string_view s);

struct RankedEntry {
  std::string handle;
  double aggregate = 0.0;
  // Mean 1-based position within the tie group.
  double realistic_rank = 0.0;
  // Worst 1-based position within the tie group.
  std::size_t pessimistic_rank = 0;

  bool operator==(const RankedEntry&) const = default;
};

// Best first. Within a tie group entries are ordered by handle.
struct RankedList {
  std::vector<RankedEntry> entries;

  const RankedEntry* Find(const std::string& handle) const;
  // The target counts as retrieved only if even the worst tie placement
  // keeps it within the top k.
  bool InTopK(const std::string& handle, std::size_t k) const;
  bool operator==(const RankedList&) const = default;
};

// Aggregates within this relative distance are treated as tied, so
// rounding in the weighted sums cannot split a mathematical tie.
inline constexpr double kTieTolerance = 1e-12;

std::map<std::string, double> AggregateScore(const ScoreTable& table,
                                             const WeightVector& weights);

// Per sensor, descending-similarity ranks with ties at their mean position;
// then sum_s w_s * rank_s.
std::map<std::string, double> AggregateRank(const ScoreTable& table,
                                            const WeightVector& weights);

// Realistic (mean) ranks for one column of values; higher value is better.
std::vector<double> RealisticRanksDescending(const std::vector<double>& values);

RankedList RankCandidates(const ScoreTable& table, RankingMethod method,
                          const WeightVector& weights);

// handle,aggregate,realistic_rank,pessimistic_rank
void WriteRankedListCsv(const RankedList& list, std::ostream& out,
                        const std::string& target_label = "");

}  // namespace reident

#endif  // REIDENT_RANKING_HPP_
