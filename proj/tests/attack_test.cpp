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
#include <cmath>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "reident/attack.hpp"
#include "reident/dtw.hpp"
#include "reident/error.hpp"
#include "reident/preprocess.hpp"

namespace reident {
namespace {

using AC = AffectiveClass;

// Aligned record with every channel following f(modality, i) plus an offset.
SubjectRecord Aligned(const std::string& id, std::size_t n, double offset,
                      const std::vector<AC>& labels = {}) {
  return oracle::MakeRecord(id, 64.0, labels.empty() ? std::vector<AC>(n, AC::kNeutral) : labels,
                            [&](Modality m, std::size_t i) {
                              return offset + std::sin(0.3 * static_cast<double>(i) +
                                                       static_cast<double>(Index(m)));
                            });
}

Snippet Slice(const SubjectRecord& r, std::size_t begin, std::size_t len) {
  Snippet s;
  for (const auto& [m, series] : r.series) {
    SensorSeries out = series;
    out.values.assign(series.values.begin() + begin, series.values.begin() + begin + len);
    out.labels.assign(series.labels.begin() + begin, series.labels.begin() + begin + len);
    s.emplace(m, out);
  }
  return s;
}

AttackInstance Instance(const std::vector<SubjectRecord>& records, const Snippet& snippet) {
  AttackInstance inst;
  inst.target_id = "T";
  inst.attacker_snippet = snippet;
  for (std::size_t i = 0; i < records.size(); ++i) {
    inst.collection.push_back({"c" + std::to_string(i), std::make_shared<SubjectRecord>(records[i])});
  }
  inst.truth = "c0";
  return inst;
}

TEST(RunAttack, OneRowPerCandidateAndSensor) {
  std::vector<SubjectRecord> records;
  for (int i = 0; i < 5; ++i) records.push_back(Aligned("S" + std::to_string(i), 40, i));
  const ScoreTable t = RunAttack(Instance(records, Slice(records[0], 5, 13)), DtwConfig{});
  ASSERT_EQ(t.rows.size(), 5u);
  EXPECT_TRUE(std::is_sorted(t.rows.begin(), t.rows.end(),
                             [](const ScoreRow& a, const ScoreRow& b) { return a.handle < b.handle; }));
  for (const auto& row : t.rows) {
    for (Sensor s : kAllSensors) {
      EXPECT_GT(row[s], 0.0);
      EXPECT_LE(row[s], 1.0);
    }
  }
  EXPECT_TRUE(t.warnings.empty());
}

TEST(RunAttack, MatchesDirectDtw) {
  std::vector<SubjectRecord> records = {Aligned("A", 30, 0), Aligned("B", 26, 0.5)};
  const Snippet snip = Slice(records[1], 3, 13);
  const DtwConfig config;
  const ScoreTable t = RunAttack(Instance(records, snip), config);
  for (std::size_t c = 0; c < 2; ++c) {
    const ScoreRow& row = *t.Find("c" + std::to_string(c));
    EXPECT_DOUBLE_EQ(row[Sensor::kBvp],
                     ToSimilarity(DtwDistance(snip.at(Modality::kBvp).values,
                                              records[c].at(Modality::kBvp).values, config)));
    double acc = 0;
    for (Modality m : ModalitiesOf(Sensor::kAcc)) {
      acc += DtwDistance(snip.at(m).values, records[c].at(m).values, config);
    }
    EXPECT_NEAR(row[Sensor::kAcc], ToSimilarity(acc / 3), 1e-15);
  }
}

TEST(RunAttack, IdenticalRecordScoresOne) {
  const SubjectRecord r = Aligned("A", 13, 0);
  const ScoreTable t = RunAttack(Instance({r}, Slice(r, 0, 13)), DtwConfig{});
  for (Sensor s : kAllSensors) EXPECT_EQ(t.rows[0][s], 1.0);
}

TEST(RunAttack, CollectionOrderDoesNotMatter) {
  std::vector<SubjectRecord> records;
  for (int i = 0; i < 4; ++i) records.push_back(Aligned("S" + std::to_string(i), 30, 0.3 * i));
  const Snippet snip = Slice(records[2], 4, 13);
  AttackInstance a = Instance(records, snip);
  AttackInstance b = a;
  std::reverse(b.collection.begin(), b.collection.end());
  EXPECT_EQ(RunAttack(a, DtwConfig{}, 1), RunAttack(b, DtwConfig{}, 3));
}

TEST(RunAttack, CandidateWithoutClassScoresZero) {
  std::vector<AC> mixed(30, AC::kNeutral);
  std::fill(mixed.begin() + 10, mixed.end(), AC::kStress);
  std::vector<SubjectRecord> records = {Aligned("A", 30, 0, mixed), Aligned("B", 30, 0)};
  AttackInstance inst = Instance(records, Slice(records[0], 12, 13));
  inst.candidate_class = AC::kStress;
  const ScoreTable t = RunAttack(inst, DtwConfig{});
  ASSERT_EQ(t.warnings.size(), 1u);
  EXPECT_NE(t.warnings[0].find("c1"), std::string::npos);
  for (Sensor s : kAllSensors) {
    EXPECT_EQ((*t.Find("c1"))[s], 0.0);
    EXPECT_GT((*t.Find("c0"))[s], 0.0);
  }
}

TEST(RunAttack, MissingSnippetModality) {
  const SubjectRecord r = Aligned("A", 30, 0);
  Snippet snip = Slice(r, 0, 13);
  snip.erase(Modality::kEda);
  EXPECT_THROW(RunAttack(Instance({r}, snip), DtwConfig{}), Error);
}

TEST(ScoreTables, CsvLayout) {
  ScoreTable t;
  t.target_id = "S1";
  t.rows.push_back({"ab", {0.5, 0.25, 1, 0}});
  std::ostringstream out;
  WriteScoreTablesCsv({t}, out);
  EXPECT_EQ(out.str(),
            "target,handle,sensor,similarity\nS1,ab,BVP,0.5\nS1,ab,EDA,0.25\n"
            "S1,ab,TEMP,1\nS1,ab,ACC,0\n");
}

}  // namespace
}  // namespace reident
