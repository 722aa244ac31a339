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

#ifndef REIDENT_EVAL_HPP_
#define REIDENT_EVAL_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "reident/attack.hpp"
#include "reident/core.hpp"
#include "reident/dtw.hpp"
#include "reident/preprocess.hpp"
#include "reident/ranking.hpp"

namespace reident {

// A P@k curve is treated as saturated once it is this close to 1.
inline constexpr double kSaturationTolerance = 1e-12;

// Prevalence weights of the three affective states.
class ClassWeights {
 public:
  // 0.53 / 0.30 / 0.17.
  ClassWeights();
  // Throws ConfigError unless non-negative and summing to 1 within 1e-9.
  ClassWeights(double neutral, double stress, double amusement);

  double operator[](AffectiveClass c) const;

 private:
  double neutral_, stress_, amusement_;
};

// How the affective classes enter an evaluation.
struct ClassPolicy {
  enum class Kind { kAll, kSingle, kWeighted };
  Kind kind = Kind::kAll;
  AffectiveClass single = AffectiveClass::kNeutral;
  ClassWeights weights;

  static ClassPolicy All() { return {}; }
  static ClassPolicy Single(AffectiveClass c) { return {Kind::kSingle, c, {}}; }
  static ClassPolicy Weighted(ClassWeights w = {}) {
    return {Kind::kWeighted, AffectiveClass::kNeutral, w};
  }
  // Classes whose attacks must be run; nullopt means "no class filter".
  std::vector<std::optional<AffectiveClass>> Slots() const;
};

std::string ToString(const ClassPolicy& p);

struct ConfigDescriptor {
  std::string method;
  std::string class_policy;
  std::string weights;
  double snippet_fraction = 0.0;
  std::string dtw;
  std::string label;

  bool operator==(const ConfigDescriptor&) const = default;
};

struct PrecisionReport {
  ConfigDescriptor config;
  // p_at_k[k - 1] for k = 1..N.
  std::vector<double> p_at_k;
  std::size_t max_at_k = 0;
  std::size_t n_targets = 0;
  std::size_t skipped_targets = 0;

  std::size_t n_candidates() const { return p_at_k.size(); }
  double at(std::size_t k) const { return p_at_k.at(k - 1); }
};

// Smallest k with p_at_k(k) >= 1 - kSaturationTolerance.
std::size_t MaxAtK(const std::vector<double>& p_at_k);

struct RankedTarget {
  RankedList list;
  std::string truth;
};

// P@k = fraction of targets whose pessimistic rank is <= k. Throws EvalError
// when a truth handle is missing, lists differ in length, or there are no
// targets.
PrecisionReport PrecisionAtK(const std::vector<RankedTarget>& targets);

// Pointwise convex combination over classes; max@k recomputed. Throws
// EvalError when a class with positive weight has no report or the k-ranges
// differ.
PrecisionReport ClassWeightedReport(
    const std::map<AffectiveClass, PrecisionReport>& reports,
    const ClassWeights& weights);

// Score tables of one batch of attacks, cached so reweighting never reruns
// DTW.
struct ScoredAttacks {
  std::vector<ScoreTable> tables;
  std::vector<std::string> truths;
  std::vector<std::string> skipped_targets;
  double snippet_fraction = 0.0;
  std::string dtw;
};

ScoredAttacks ScoreInstances(const InstanceSet& set, const DtwConfig& config,
                             std::size_t threads = 0);

std::vector<RankedTarget> RankAll(const ScoredAttacks& attacks,
                                  RankingMethod method,
                                  const WeightVector& weights);

PrecisionReport Evaluate(const ScoredAttacks& attacks, RankingMethod method,
                         const WeightVector& weights);

// Number of targets whose pessimistic rank is <= k.
std::size_t HitsAtK(const ScoredAttacks& attacks, RankingMethod method,
                    const WeightVector& weights, std::size_t k);

// Attacks for every slot a class policy needs.
using Scenario = std::map<std::optional<AffectiveClass>, ScoredAttacks>;

struct ScenarioOptions {
  PreprocessConfig preprocess;
  DtwConfig dtw;
  ClassPolicy class_policy;
  ClassFilterSide filter_side = ClassFilterSide::kBoth;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
};

// dataset must already be preprocessed.
Scenario BuildScenario(
    const std::vector<std::shared_ptr<const SubjectRecord>>& dataset,
    double fraction, const ScenarioOptions& options);

// Single-class or unfiltered report, or the class-weighted mean.
PrecisionReport EvaluateScenario(const Scenario& scenario,
                                 const ClassPolicy& policy,
                                 RankingMethod method,
                                 const WeightVector& weights);

// The 15 non-empty subsets of {BVP, EDA, ACC, TEMP}, by size then in that
// sensor order.
std::vector<std::vector<Sensor>> SensorCombinations();
std::string CombinationName(const std::vector<Sensor>& sensors);

struct NamedReport {
  std::string name;
  PrecisionReport report;
};

// Equal-weight indicator vectors for every combination.
std::vector<NamedReport> SweepSensorCombinations(const Scenario& scenario,
                                                 const ClassPolicy& policy,
                                                 RankingMethod method);

std::vector<NamedReport> SweepSensorCombinations(const InstanceSet& instances,
                                                 const DtwConfig& config,
                                                 RankingMethod method,
                                                 std::size_t threads = 0);

inline const std::vector<double> kDefaultFractions = {0.0001, 0.001, 0.01,
                                                      0.05, 0.1};

// Rebuilds and scores attacks per fraction. Throws ConfigError for an empty
// list or fractions outside (0, 1).
std::vector<std::pair<double, PrecisionReport>> SweepSetSizes(
    const std::vector<std::shared_ptr<const SubjectRecord>>& dataset,
    const std::vector<double>& fractions, const ScenarioOptions& options,
    RankingMethod method, const WeightVector& weights);

// Integer grid over 4 sensors: each component a multiple of step, summing to
// one. Ordered lexicographically by (ACC, BVP, EDA, TEMP). Throws
// ConfigError unless step divides 1.
std::vector<WeightVector> EnumerateWeightGrid(double step);

struct GridOptimum {
  std::size_t objective_k = 1;
  double best_p = 0.0;
  std::size_t evaluated = 0;
  // All vectors reaching best_p, in grid order.
  std::vector<WeightVector> vectors;
};

// Exhaustive search over the grid for the weights maximising P@objective_k.
GridOptimum GridSearch(const ScoredAttacks& attacks, double step,
                       std::size_t objective_k,
                       RankingMethod method = RankingMethod::kScore,
                       std::size_t threads = 0);

// GridSearch per class.
std::map<AffectiveClass, GridOptimum> GridSearchWeights(
    const std::map<AffectiveClass, ScoredAttacks>& per_class, double step,
    std::size_t objective_k, RankingMethod method = RankingMethod::kScore,
    std::size_t threads = 0);

// p(k) = k / n for k = 1..n.
std::vector<double> RandomBaseline(std::size_t n_candidates);

nlohmann::ordered_json ToJson(const PrecisionReport& report);
void WriteReportJson(const PrecisionReport& report, std::ostream& out);
// Columns: name,n_targets,skipped,max_at_k,p_at_1..p_at_N.
void WriteReportsCsv(const std::vector<NamedReport>& reports, std::ostream& out);

}  // namespace reident

#endif  // REIDENT_EVAL_HPP_
