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


#include <atomic>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "reident/core.hpp"
#include "reident/error.hpp"
#include "reident/parallel.hpp"
#include "reident/random.hpp"

namespace reident {
namespace {

SubjectRecord WellFormed() {
  return oracle::MakeRecord("S1", 64.0, oracle::Blocks(10, 5, 5),
                            [](Modality, std::size_t i) { return 0.1 * i; });
}

TEST(ValidateSubject, Examples) {
  EXPECT_TRUE(ValidateSubject(WellFormed()).empty());

  SubjectRecord missing = WellFormed();
  missing.series.erase(Modality::kTemp);
  EXPECT_EQ(ValidateSubject(missing), std::vector<std::string>{"missing modality TEMP"});

  SubjectRecord nan = WellFormed();
  nan.series.at(Modality::kBvp).values[7] = NAN;
  EXPECT_EQ(ValidateSubject(nan),
            std::vector<std::string>{"non-finite value in BVP at index 7"});
}

TEST(ValidateSubject, AlignmentOnlyWhenRequired) {
  SubjectRecord r = WellFormed();
  r.series.at(Modality::kEda).rate_hz = 4.0;
  EXPECT_TRUE(ValidateSubject(r).empty());
  EXPECT_FALSE(ValidateSubject(r, true).empty());
}

TEST(Names, RoundTrip) {
  for (Modality m : kAllModalities) EXPECT_EQ(ParseModality(ToString(m)), m);
  for (Sensor s : kAllSensors) EXPECT_EQ(ParseSensor(ToString(s)), s);
  for (AffectiveClass c : kAllClasses) {
    EXPECT_EQ(ParseAffectiveClass(ToString(c)), c);
    EXPECT_EQ(ClassFromCode(ToCode(c)), c);
  }
  EXPECT_EQ(ParseSensor("acc"), Sensor::kAcc);
  EXPECT_FALSE(ClassFromCode(0));
  EXPECT_FALSE(ClassFromCode(4));
  EXPECT_EQ(SensorOf(Modality::kAccY), Sensor::kAcc);
  EXPECT_EQ(ModalitiesOf(Sensor::kAcc).size(), 3u);
}

TEST(WeightVector, Construction) {
  const WeightVector equal;
  for (Sensor s : kAllSensors) EXPECT_EQ(equal[s], 0.25);
  const WeightVector bvp_acc = WeightVector::Indicator({Sensor::kBvp, Sensor::kAcc});
  EXPECT_EQ(bvp_acc[Sensor::kBvp], 0.5);
  EXPECT_EQ(bvp_acc[Sensor::kEda], 0.0);
  EXPECT_THROW(WeightVector(0.5, 0.5, 0.5, 0.0), ConfigError);
  EXPECT_THROW(WeightVector(1.5, -0.5, 0.0, 0.0), ConfigError);
  EXPECT_THROW(WeightVector::Indicator({}), ConfigError);
  EXPECT_NO_THROW(WeightVector(0.1, 0.2, 0.3, 0.4));
}

TEST(Random, DerivedStreamsAreDistinct) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (std::uint64_t stream = 0; stream < 20; ++stream) {
      seen.insert(DeriveSeed(seed, stream));
    }
  }
  EXPECT_EQ(seen.size(), 400u);
}

TEST(Random, UniformAndBelow) {
  Rng rng(1);
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 10000, 0.5, 0.02);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 7000; ++i) ++counts[rng.Below(7)];
  for (int c : counts) EXPECT_NEAR(c, 1000, 150);
}

TEST(Random, ShuffleIsSeededPermutation) {
  std::vector<int> a(50), b(50);
  std::iota(a.begin(), a.end(), 0);
  b = a;
  Rng r1(42), r2(42);
  Shuffle(a.begin(), a.end(), r1);
  Shuffle(b.begin(), b.end(), r2);
  EXPECT_EQ(a, b);
  std::vector<int> sorted = a;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
}

TEST(Random, HexNonce) {
  Rng rng(3);
  const std::string h = rng.HexNonce();
  EXPECT_EQ(h.size(), 16u);
  EXPECT_EQ(h.find_first_not_of("0123456789abcdef"), std::string::npos);
}

TEST(Parallel, EveryIndexOnce) {
  for (std::size_t threads : {1u, 2u, 4u}) {
    std::vector<std::atomic<int>> hits(1000);
    ParallelFor(hits.size(), threads, [&](std::size_t i) { hits[i].fetch_add(1); });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(Parallel, PropagatesExceptions) {
  EXPECT_THROW(ParallelFor(100, 3,
                           [](std::size_t i) {
                             if (i == 37) throw std::runtime_error("boom");
                           }),
               std::runtime_error);
}

}  // namespace
}  // namespace reident
