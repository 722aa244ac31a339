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


#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "reident/error.hpp"
#include "reident/ingest.hpp"
#include "reident/preprocess.hpp"

namespace reident {
namespace {

using AC = AffectiveClass;

SensorSeries Series(Modality m, double rate, std::vector<double> values) {
  SensorSeries s;
  s.modality = m;
  s.rate_hz = rate;
  s.labels.assign(values.size(), AC::kNeutral);
  s.values = std::move(values);
  return s;
}

TEST(Resample, LinearRamp) {
  const SensorSeries out = Resample(Series(Modality::kEda, 1.0, {0, 1, 2}), 2.0);
  EXPECT_EQ(out.rate_hz, 2.0);
  EXPECT_EQ(out.values, (std::vector<double>{0, 0.5, 1, 1.5, 2}));
}

TEST(Resample, ConstantStaysConstant) {
  const SensorSeries out =
      Resample(Series(Modality::kTemp, 4.0, std::vector<double>(40, 33.25)), 64.0);
  ASSERT_EQ(out.size(), 625u);  // 9.75 s spanned at 64 Hz, plus the origin
  for (double v : out.values) EXPECT_EQ(v, 33.25);
}

TEST(Resample, NeedsTwoSamples) {
  EXPECT_THROW(Resample(Series(Modality::kBvp, 64.0, {1.0}), 32.0), PreprocessError);
}

TEST(Resample, LabelsFollowNearestSample) {
  SensorSeries s = Series(Modality::kEda, 1.0, {0, 1, 2});
  s.labels = {AC::kNeutral, AC::kStress, AC::kAmusement};
  const SensorSeries out = Resample(s, 4.0);
  ASSERT_EQ(out.labels.size(), 9u);
  EXPECT_EQ(out.labels[1], AC::kNeutral);   // t = 0.25
  EXPECT_EQ(out.labels[2], AC::kStress);    // t = 0.5, rounds up
  EXPECT_EQ(out.labels[7], AC::kAmusement); // t = 1.75
}

TEST(PreprocessConfig, DefaultWindowIsThirteenSamples) {
  EXPECT_EQ(PreprocessConfig{}.WindowSamples(), 13u);
  PreprocessConfig bad;
  bad.window_ms = 10.0;  // under one sample at 64 Hz
  EXPECT_THROW(CheckPreprocessConfig(bad), ConfigError);
}

TEST(PreprocessSubject, AlignsAndStandardises) {
  SyntheticConfig config;
  config.n_subjects = 2;
  config.duration_s = 30.0;
  config.seed = 3;
  const auto raw = GenerateSynthetic(config);
  const SubjectRecord rec = PreprocessSubject(raw[0], PreprocessConfig{});
  EXPECT_TRUE(ValidateSubject(rec, true).empty());
  const std::size_t n = rec.length();
  EXPECT_EQ(n % 13, 0u);
  EXPECT_LE(n, 30u * 64u);
  for (const auto& [m, s] : rec.series) {
    EXPECT_EQ(s.rate_hz, 64.0);
    EXPECT_EQ(s.labels, rec.at(Modality::kBvp).labels);
    double mean = 0, var = 0;
    for (double v : s.values) mean += v;
    mean /= static_cast<double>(n);
    for (double v : s.values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    EXPECT_NEAR(mean, 0.0, 1e-6);
    EXPECT_NEAR(var, 1.0, 1e-3);
  }
}

TEST(PreprocessSubject, ConstantChannelBecomesZero) {
  const auto rec = oracle::MakeRecord("S1", 64.0, oracle::Blocks(52, 0, 0),
                                      [](Modality m, std::size_t i) {
                                        return m == Modality::kTemp ? 33.0 : std::sin(0.3 * i);
                                      });
  const SubjectRecord out = PreprocessSubject(rec, PreprocessConfig{});
  for (double v : out.at(Modality::kTemp).values) EXPECT_EQ(v, 0.0);
}

TEST(PreprocessSubject, NoneKeepsValues) {
  const auto rec = oracle::MakeRecord("S1", 64.0, oracle::Blocks(30, 0, 0),
                                      [](Modality, std::size_t i) { return 1.5 * i; });
  PreprocessConfig config;
  config.normalization = Normalization::kNone;
  const SubjectRecord out = PreprocessSubject(rec, config);
  ASSERT_EQ(out.length(), 26u);  // two whole windows
  EXPECT_EQ(out.at(Modality::kEda).values[25], 37.5);
}

TEST(Snippet, Lengths) {
  EXPECT_EQ(SnippetLength(138240, 0.0001, 13), 13u);
  EXPECT_EQ(SnippetLength(138240, 0.1, 13), 13824u);  // 216 s at 64 Hz
  EXPECT_EQ(SnippetLength(138240, 0.01, 13), 1382u);
}

TEST(Snippet, SplitTakesMiddleAndReassembles) {
  const auto rec = oracle::MakeRecord(
      "S1", 64.0, oracle::Blocks(60, 30, 20),
      [](Modality m, std::size_t i) { return static_cast<double>(Index(m) * 1000 + i); });
  const SnippetSplit split = SplitAttackerSet(rec, 0.0001, std::nullopt, 13);
  EXPECT_EQ(split.snippet.at(Modality::kBvp).size(), 13u);
  EXPECT_EQ(split.cut_start, 55u - 6u);
  EXPECT_EQ(split.shortened.length(), 97u);
  EXPECT_EQ(split.snippet.at(Modality::kAccY).values.front(), 4000.0 + 49.0);
  EXPECT_EQ(ReinsertSnippet(split.shortened, split.snippet, split.cut_start), rec);
}

TEST(Snippet, ClassFilterUsesLongestRun) {
  auto labels = oracle::Blocks(60, 30, 20);
  labels[5] = AC::kStress;  // a stray one-sample run must not be chosen
  const auto rec = oracle::MakeRecord("S1", 64.0, labels,
                                      [](Modality, std::size_t i) { return 1.0 * i; });
  const SnippetSplit split = SplitAttackerSet(rec, 0.0001, AC::kStress, 13);
  for (AC c : split.snippet.at(Modality::kEda).labels) EXPECT_EQ(c, AC::kStress);
  EXPECT_EQ(split.cut_start, 75u - 6u);
  EXPECT_EQ(ReinsertSnippet(split.shortened, split.snippet, split.cut_start), rec);
}

TEST(Snippet, Errors) {
  const auto rec = oracle::MakeRecord("S1", 64.0, oracle::Blocks(60, 10, 0),
                                      [](Modality, std::size_t i) { return 1.0 * i; });
  EXPECT_THROW(SplitAttackerSet(rec, 1.0, std::nullopt, 13), PreprocessError);
  EXPECT_THROW(SplitAttackerSet(rec, 0.0, std::nullopt, 13), PreprocessError);
  EXPECT_THROW(SplitAttackerSet(rec, 0.0001, AC::kStress, 13), PreprocessError);
  EXPECT_THROW(SplitAttackerSet(rec, 0.0001, AC::kAmusement, 13), PreprocessError);
}

std::vector<SubjectRecord> SmallDataset(std::size_t n) {
  std::vector<SubjectRecord> out;
  for (std::size_t s = 0; s < n; ++s) {
    out.push_back(oracle::MakeRecord(
        "S" + std::to_string(s + 1), 64.0, oracle::Blocks(52, 26, 26),
        [s](Modality m, std::size_t i) { return std::sin(0.1 * i * (s + 1) + Index(m)); }));
  }
  return out;
}

TEST(AttackInstances, OnePerTargetWithFullCollection) {
  const auto data = SmallDataset(15);
  const InstanceSet set = BuildAttackInstances(data, PreprocessConfig{}, AttackSetup{});
  ASSERT_EQ(set.instances.size(), 15u);
  for (std::size_t t = 0; t < 15; ++t) {
    const AttackInstance& inst = set.instances[t];
    EXPECT_EQ(inst.target_id, data[t].subject_id);
    ASSERT_EQ(inst.collection.size(), 15u);
    std::size_t truth_hits = 0;
    for (std::size_t c = 0; c < 15; ++c) {
      const auto& e = inst.collection[c];
      EXPECT_EQ(e.handle.size(), 16u);
      EXPECT_TRUE(e.record->subject_id.empty());
      if (c > 0) EXPECT_LT(inst.collection[c - 1].handle, e.handle);
      if (e.handle == inst.truth) {
        ++truth_hits;
        EXPECT_EQ(e.record->length(), data[t].length() - 13);
      }
    }
    EXPECT_EQ(truth_hits, 1u);
  }
}

TEST(AttackInstances, SmallestLegalAndDegenerate) {
  EXPECT_EQ(BuildAttackInstances(SmallDataset(2), PreprocessConfig{}, AttackSetup{})
                .instances.at(1)
                .collection.size(),
            2u);
  EXPECT_THROW(BuildAttackInstances(SmallDataset(1), PreprocessConfig{}, AttackSetup{}),
               PreprocessError);
}

TEST(AttackInstances, SeededHandles) {
  const auto data = SmallDataset(4);
  AttackSetup a, b;
  a.seed = b.seed = 99;
  const auto x = BuildAttackInstances(data, PreprocessConfig{}, a);
  const auto y = BuildAttackInstances(data, PreprocessConfig{}, b);
  b.seed = 100;
  const auto z = BuildAttackInstances(data, PreprocessConfig{}, b);
  EXPECT_EQ(x.instances[0].truth, y.instances[0].truth);
  EXPECT_NE(x.instances[0].truth, z.instances[0].truth);
}

TEST(AttackInstances, ClassFilterSideAndSkips) {
  auto data = SmallDataset(3);
  data[2] = oracle::MakeRecord("S3", 64.0, oracle::Blocks(104, 0, 0),
                               [](Modality, std::size_t i) { return 0.5 * i; });
  AttackSetup setup;
  setup.class_filter = AC::kStress;
  EXPECT_THROW(BuildAttackInstances(data, PreprocessConfig{}, setup), PreprocessError);
  setup.skip_insufficient = true;
  InstanceSet set = BuildAttackInstances(data, PreprocessConfig{}, setup);
  EXPECT_EQ(set.instances.size(), 2u);
  EXPECT_EQ(set.skipped_targets, std::vector<std::string>{"S3"});
  EXPECT_EQ(set.instances[0].candidate_class, AC::kStress);
  setup.filter_side = ClassFilterSide::kAttacker;
  set = BuildAttackInstances(data, PreprocessConfig{}, setup);
  EXPECT_FALSE(set.instances[0].candidate_class.has_value());
}

}  // namespace
}  // namespace reident
