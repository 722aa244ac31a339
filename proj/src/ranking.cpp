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

#include "reident/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "text_io.hpp"

namespace reident {
namespace {

bool NearlyEqual(double a, double b) {
  return std::abs(a - b) <= kTieTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

std::string_view ToString(RankingMethod m) {
  return m == RankingMethod::kScore ? "score" : "rank";
}

std::optional<RankingMethod> ParseRankingMethod(std::string_view s) {
  if (s == "score") return RankingMethod::kScore;
  if (s == "rank") return RankingMethod::kRank;
  return std::nullopt;
}

const RankedEntry* RankedList::Find(const std::string& handle) const {
  for (const auto& e : entries) {
    if (e.handle == handle) return &e;
  }
  return nullptr;
}

bool RankedList::InTopK(const std::string& handle, std::size_t k) const {
  const RankedEntry* e = Find(handle);
  return e != nullptr && e->pessimistic_rank <= k;
}

std::map<std::string, double> AggregateScore(const ScoreTable& table,
                                             const WeightVector& weights) {
  std::map<std::string, double> out;
  for (const ScoreRow& row : table.rows) {
    double sum = 0.0;
    for (Sensor s : kAllSensors) sum += weights[s] * row[s];
    out[row.handle] = sum;
  }
  return out;
}

std::vector<double> RealisticRanksDescending(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] > values[b];
  });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i+1 .. j+1.
    const double mean = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t p = i; p <= j; ++p) ranks[order[p]] = mean;
    i = j + 1;
  }
  return ranks;
}

std::map<std::string, double> AggregateRank(const ScoreTable& table,
                                            const WeightVector& weights) {
  const std::size_t n = table.rows.size();
  std::vector<double> aggregate(n, 0.0);
  std::vector<double> column(n);
  for (Sensor s : kAllSensors) {
    for (std::size_t i = 0; i < n; ++i) column[i] = table.rows[i][s];
    const auto ranks = RealisticRanksDescending(column);
    for (std::size_t i = 0; i < n; ++i) aggregate[i] += weights[s] * ranks[i];
  }
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < n; ++i) out[table.rows[i].handle] = aggregate[i];
  return out;
}

RankedList RankCandidates(const ScoreTable& table, RankingMethod method,
                          const WeightVector& weights) {
  const auto aggregates = method == RankingMethod::kScore
                              ? AggregateScore(table, weights)
                              : AggregateRank(table, weights);
  RankedList list;
  for (const auto& [handle, value] : aggregates) {
    list.entries.push_back({handle, value, 0.0, 0});
  }
  const bool higher_better = method == RankingMethod::kScore;
  std::stable_sort(list.entries.begin(), list.entries.end(),
                   [&](const RankedEntry& a, const RankedEntry& b) {
                     return higher_better ? a.aggregate > b.aggregate
                                          : a.aggregate < b.aggregate;
                   });
  auto& e = list.entries;
  std::size_t i = 0;
  while (i < e.size()) {
    std::size_t j = i;
    while (j + 1 < e.size() && NearlyEqual(e[j + 1].aggregate, e[j].aggregate)) ++j;
    std::sort(e.begin() + static_cast<std::ptrdiff_t>(i),
              e.begin() + static_cast<std::ptrdiff_t>(j + 1),
              [](const RankedEntry& a, const RankedEntry& b) { return a.handle < b.handle; });
    const double mean = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t p = i; p <= j; ++p) {
      e[p].realistic_rank = mean;
      e[p].pessimistic_rank = j + 1;
    }
    i = j + 1;
  }
  return list;
}

void WriteRankedListCsv(const RankedList& list, std::ostream& out,
                        const std::string& target_label) {
  std::string line;
  for (const auto& e : list.entries) {
    line.clear();
    if (!target_label.empty()) line = target_label + ',';
    line += e.handle + ',';
    textio::AppendDouble(line, e.aggregate);
    line += ',';
    textio::AppendDouble(line, e.realistic_rank);
    line += ',' + std::to_string(e.pessimistic_rank);
    out << line << '\n';
  }
}

}  // namespace reident
