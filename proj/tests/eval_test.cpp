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


#include <algorithm>
#include <array>
#include <cstdio>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "reident/error.hpp"
#include "reident/eval.hpp"
#include "reident/ingest.hpp"
#include "reident/preprocess.hpp"
#include "reident/random.hpp"

namespace reident {
namespace {

using AC = AffectiveClass;

std::string Handle(std::size_t i) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "h%02zu", i);
  return buf;
}

// n targets over n candidates; the truth sits at the given position of a
// strictly decreasing BVP column.
std::vector<RankedTarget> TargetsAtPosition(std::size_t n, std::size_t position) {
  std::vector<RankedTarget> out;
  for (std::size_t t = 0; t < n; ++t) {
    ScoreTable table;
    for (std::size_t i = 0; i < n; ++i) {
      ScoreRow row;
      row.handle = Handle(i);
      row.similarity = {1.0 - 0.01 * static_cast<double>(i), 0, 0, 0};
      table.rows.push_back(row);
    }
    out.push_back({RankCandidates(table, RankingMethod::kScore, WeightVector(1, 0, 0, 0)),
                   Handle(position - 1)});
  }
  return out;
}

PrecisionReport ReportWithP1(double p1) {
  PrecisionReport r;
  r.p_at_k.assign(15, 1.0);
  r.p_at_k[0] = p1;
  for (std::size_t k = 1; k < 14; ++k) r.p_at_k[k] = std::min(1.0, p1 + 0.05 * k);
  r.max_at_k = MaxAtK(r.p_at_k);
  r.n_targets = 15;
  return r;
}

TEST(PrecisionAtK, BestAndWorstCase) {
  const PrecisionReport best = PrecisionAtK(TargetsAtPosition(15, 1));
  EXPECT_EQ(best.at(1), 1.0);
  EXPECT_EQ(best.max_at_k, 1u);
  EXPECT_EQ(best.n_targets, 15u);
  const PrecisionReport worst = PrecisionAtK(TargetsAtPosition(15, 15));
  for (std::size_t k = 1; k < 15; ++k) EXPECT_EQ(worst.at(k), 0.0);
  EXPECT_EQ(worst.at(15), 1.0);
  EXPECT_EQ(worst.max_at_k, 15u);
}

TEST(PrecisionAtK, Errors) {
  auto targets = TargetsAtPosition(3, 1);
  EXPECT_THROW(PrecisionAtK({}), EvalError);
  targets[1].truth = "missing";
  EXPECT_THROW(PrecisionAtK(targets), EvalError);
  targets = TargetsAtPosition(3, 1);
  targets[2].list.entries.pop_back();
  EXPECT_THROW(PrecisionAtK(targets), EvalError);
}

TEST(MaxAtK, Tolerance) {
  EXPECT_EQ(MaxAtK({0.5, 1.0 - 1e-13, 1.0}), 2u);
  EXPECT_EQ(MaxAtK({0.5, 1.0 - 1e-9, 1.0}), 3u);
}

TEST(ClassWeightedReport, TableArithmetic) {
  const std::map<AC, PrecisionReport> reports = {{AC::kNeutral, ReportWithP1(0.226)},
                                                 {AC::kStress, ReportWithP1(0.165)},
                                                 {AC::kAmusement, ReportWithP1(0.172)}};
  const PrecisionReport r = ClassWeightedReport(reports, ClassWeights());
  EXPECT_NEAR(r.at(1), 0.199, 0.0005);
  EXPECT_NEAR(r.at(1), 0.53 * 0.226 + 0.30 * 0.165 + 0.17 * 0.172, 1e-15);
  EXPECT_EQ(r.at(15), 1.0);
  EXPECT_EQ(r.max_at_k, 15u);
}

TEST(ClassWeightedReport, DegenerateAndIdentical) {
  const std::map<AC, PrecisionReport> reports = {{AC::kNeutral, ReportWithP1(0.226)},
                                                 {AC::kStress, ReportWithP1(0.165)},
                                                 {AC::kAmusement, ReportWithP1(0.172)}};
  EXPECT_EQ(ClassWeightedReport(reports, ClassWeights(1, 0, 0)).p_at_k,
            reports.at(AC::kNeutral).p_at_k);
  const std::map<AC, PrecisionReport> same = {{AC::kNeutral, ReportWithP1(0.3)},
                                              {AC::kStress, ReportWithP1(0.3)},
                                              {AC::kAmusement, ReportWithP1(0.3)}};
  const PrecisionReport r = ClassWeightedReport(same, ClassWeights());
  for (std::size_t k = 1; k <= 15; ++k) EXPECT_NEAR(r.at(k), same.at(AC::kNeutral).at(k), 1e-15);
  EXPECT_EQ(r.max_at_k, same.at(AC::kNeutral).max_at_k);
}

TEST(ClassWeightedReport, MissingClass) {
  const std::map<AC, PrecisionReport> partial = {{AC::kNeutral, ReportWithP1(0.2)}};
  EXPECT_THROW(ClassWeightedReport(partial, ClassWeights()), EvalError);
  EXPECT_NO_THROW(ClassWeightedReport(partial, ClassWeights(1, 0, 0)));
  EXPECT_THROW(ClassWeights(0.5, 0.5, 0.5), ConfigError);
}

TEST(WeightGrid, TenthsGivesAllCompositions) {
  const auto grid = EnumerateWeightGrid(0.1);
  ASSERT_EQ(grid.size(), 286u);
  std::vector<std::array<int, 4>> tenths;
  for (const auto& w : grid) {
    double sum = 0;
    for (double c : w.components()) sum += c;
    EXPECT_NEAR(sum, 1.0, 1e-12);
    tenths.push_back({static_cast<int>(std::lround(w[Sensor::kAcc] * 10)),
                      static_cast<int>(std::lround(w[Sensor::kBvp] * 10)),
                      static_cast<int>(std::lround(w[Sensor::kEda] * 10)),
                      static_cast<int>(std::lround(w[Sensor::kTemp] * 10))});
  }
  EXPECT_TRUE(std::is_sorted(tenths.begin(), tenths.end()));
  EXPECT_EQ(std::adjacent_find(tenths.begin(), tenths.end()), tenths.end());
  EXPECT_EQ(EnumerateWeightGrid(0.25).size(), 35u);
  EXPECT_EQ(EnumerateWeightGrid(1.0).size(), 4u);
  EXPECT_THROW(EnumerateWeightGrid(0.3), ConfigError);
  EXPECT_THROW(EnumerateWeightGrid(0.0), ConfigError);
}

TEST(SensorCombinations, FifteenInTableOrder) {
  const auto combos = SensorCombinations();
  ASSERT_EQ(combos.size(), 15u);
  std::vector<std::string> names;
  for (const auto& c : combos) names.push_back(CombinationName(c));
  EXPECT_EQ(names, (std::vector<std::string>{
                       "BVP", "EDA", "ACC", "TEMP", "BVP+EDA", "BVP+ACC", "BVP+TEMP",
                       "EDA+ACC", "EDA+TEMP", "ACC+TEMP", "BVP+EDA+ACC", "BVP+EDA+TEMP",
                       "BVP+ACC+TEMP", "EDA+ACC+TEMP", "BVP+EDA+ACC+TEMP"}));
}

TEST(RandomBaseline, KOverN) {
  const auto p = RandomBaseline(15);
  ASSERT_EQ(p.size(), 15u);
  EXPECT_NEAR(p[0], 0.0667, 5e-5);
  EXPECT_EQ(p[14], 1.0);
  EXPECT_THROW(RandomBaseline(0), EvalError);
}

TEST(RandomBaseline, MonteCarloAgrees) {
  // Candidates ranked by seeded random scores; the truth is a fixed handle.
  Rng rng(DeriveSeed(1, kStreamBaseline));
  const std::size_t n = 15, trials = 20000;
  std::vector<double> hits(n, 0.0);
  for (std::size_t t = 0; t < trials; ++t) {
    ScoreTable table;
    for (std::size_t i = 0; i < n; ++i) {
      ScoreRow row;
      row.handle = Handle(i);
      row.similarity = {rng.Uniform(), 0, 0, 0};
      table.rows.push_back(row);
    }
    const RankedList list = RankCandidates(table, RankingMethod::kScore, WeightVector(1, 0, 0, 0));
    for (std::size_t k = 1; k <= n; ++k) hits[k - 1] += list.InTopK(Handle(3), k) ? 1 : 0;
  }
  const auto expected = RandomBaseline(n);
  for (std::size_t k = 1; k < n; ++k) {
    const double p = expected[k - 1];
    const double se = std::sqrt(p * (1 - p) / trials);
    EXPECT_NEAR(hits[k - 1] / trials, p, 4 * se) << "k=" << k;
  }
}

// Only BVP separates the truth; the other sensors are noise.
ScoredAttacks BvpInformative(std::uint64_t seed) {
  Rng rng(seed);
  ScoredAttacks a;
  for (std::size_t t = 0; t < 15; ++t) {
    ScoreTable table;
    table.target_id = "S" + std::to_string(t + 1);
    for (std::size_t i = 0; i < 15; ++i) {
      ScoreRow row;
      row.handle = Handle(i);
      const double bvp = i == t ? 0.9 : 0.8 * rng.Uniform();
      row.similarity = {bvp, rng.Uniform(), rng.Uniform(), rng.Uniform()};
      table.rows.push_back(row);
    }
    a.tables.push_back(table);
    a.truths.push_back(Handle(t));
  }
  return a;
}

TEST(GridSearch, FindsInformativeSensor) {
  const ScoredAttacks attacks = BvpInformative(17);
  const GridOptimum opt = GridSearch(attacks, 0.1, 1);
  EXPECT_EQ(opt.evaluated, 286u);
  EXPECT_EQ(opt.best_p, 1.0);
  EXPECT_NE(std::find(opt.vectors.begin(), opt.vectors.end(), WeightVector(1, 0, 0, 0)),
            opt.vectors.end());
}

TEST(GridSearch, MatchesIndependentRescan) {
  const ScoredAttacks attacks = BvpInformative(18);
  for (std::size_t k : {1u, 3u}) {
    const GridOptimum opt = GridSearch(attacks, 0.1, k, RankingMethod::kScore, 2);
    double best = 0.0;
    std::vector<WeightVector> argmax;
    for (const auto& w : EnumerateWeightGrid(0.1)) {
      const double p = Evaluate(attacks, RankingMethod::kScore, w).at(k);
      if (p > best + 1e-12) {
        best = p;
        argmax = {w};
      } else if (std::abs(p - best) <= 1e-12) {
        argmax.push_back(w);
      }
    }
    EXPECT_EQ(opt.best_p, best);
    EXPECT_EQ(opt.vectors, argmax);
    for (Sensor s : kAllSensors) {
      EXPECT_GE(opt.best_p,
                Evaluate(attacks, RankingMethod::kScore, WeightVector::Indicator({s})).at(k));
    }
  }
  EXPECT_THROW(GridSearch(attacks, 0.1, 16), ConfigError);
}

TEST(Scenario, SweepsOnSmallSyntheticData) {
  SyntheticConfig sc;
  sc.n_subjects = 4;
  sc.duration_s = 20.0;
  sc.seed = 2;
  const auto data = Share(PreprocessDataset(GenerateSynthetic(sc), PreprocessConfig{}));
  ScenarioOptions options;
  options.seed = 5;
  const Scenario all = BuildScenario(data, 0.01, options);
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all.begin()->second.tables.size(), 4u);

  const auto combos = SweepSensorCombinations(all, options.class_policy, RankingMethod::kScore);
  ASSERT_EQ(combos.size(), 15u);
  for (const auto& c : combos) {
    EXPECT_TRUE(std::is_sorted(c.report.p_at_k.begin(), c.report.p_at_k.end()));
    EXPECT_EQ(c.report.p_at_k.back(), 1.0);
  }
  const auto sizes = SweepSetSizes(data, kDefaultFractions, options, RankingMethod::kScore,
                                   WeightVector());
  ASSERT_EQ(sizes.size(), 5u);
  EXPECT_THROW(SweepSetSizes(data, {}, options, RankingMethod::kScore, WeightVector()),
               ConfigError);
  EXPECT_THROW(SweepSetSizes(data, {1.0}, options, RankingMethod::kScore, WeightVector()),
               ConfigError);

  options.class_policy = ClassPolicy::Weighted();
  const Scenario classes = BuildScenario(data, 0.01, options);
  EXPECT_EQ(classes.size(), 3u);
  const PrecisionReport weighted =
      EvaluateScenario(classes, options.class_policy, RankingMethod::kScore, WeightVector());
  EXPECT_EQ(weighted.p_at_k.size(), 4u);
  EXPECT_NEAR(weighted.p_at_k.back(), 1.0, 1e-12);
  EXPECT_EQ(weighted.max_at_k, MaxAtK(weighted.p_at_k));
}

TEST(Scenario, SkipsTargetsWithoutClassData) {
  SyntheticConfig sc;
  sc.n_subjects = 3;
  sc.duration_s = 10.0;
  sc.seed = 4;
  auto raw = GenerateSynthetic(sc);
  // Relabel S2 as entirely neutral.
  for (auto& [m, s] : raw[1].series) s.labels.assign(s.labels.size(), AC::kNeutral);
  const auto data = Share(PreprocessDataset(raw, PreprocessConfig{}));
  ScenarioOptions options;
  options.class_policy = ClassPolicy::Single(AC::kAmusement);
  const Scenario sc2 = BuildScenario(data, 0.0001, options);
  const ScoredAttacks& a = sc2.at(AC::kAmusement);
  EXPECT_EQ(a.skipped_targets, std::vector<std::string>{"S2"});
  EXPECT_EQ(a.tables.size(), 2u);
  // S2's record still competes as a candidate, scored 0 with a warning.
  EXPECT_EQ(a.tables[0].warnings.size(), 1u);
  const PrecisionReport r = Evaluate(a, RankingMethod::kScore, WeightVector());
  EXPECT_EQ(r.n_targets, 2u);
  EXPECT_EQ(r.skipped_targets, 1u);
}

TEST(ReportsCsv, Format) {
  PrecisionReport r;
  r.p_at_k = {0.5, 1.0};
  r.max_at_k = 2;
  r.n_targets = 2;
  std::ostringstream out;
  WriteReportsCsv({{"BVP", r}}, out);
  EXPECT_EQ(out.str(), "name,n_targets,skipped,max_at_k,p_at_1,p_at_2\nBVP,2,0,2,0.5,1\n");
}

}  // namespace
}  // namespace reident
