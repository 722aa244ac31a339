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

#include "reident/eval.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "reident/error.hpp"
#include "reident/parallel.hpp"
#include "reident/random.hpp"
#include "text_io.hpp"

namespace reident {

ClassWeights::ClassWeights() : ClassWeights(0.53, 0.30, 0.17) {}

ClassWeights::ClassWeights(double neutral, double stress, double amusement)
    : neutral_(neutral), stress_(stress), amusement_(amusement) {
  if (!(neutral >= 0.0 && stress >= 0.0 && amusement >= 0.0) ||
      std::abs(neutral + stress + amusement - 1.0) > 1e-9) {
    throw ConfigError("class weights must be non-negative and sum to 1");
  }
}

double ClassWeights::operator[](AffectiveClass c) const {
  switch (c) {
    case AffectiveClass::kNeutral: return neutral_;
    case AffectiveClass::kStress: return stress_;
    case AffectiveClass::kAmusement: return amusement_;
  }
  return 0.0;
}

std::vector<std::optional<AffectiveClass>> ClassPolicy::Slots() const {
  switch (kind) {
    case Kind::kAll: return {std::nullopt};
    case Kind::kSingle: return {single};
    case Kind::kWeighted:
      return {AffectiveClass::kNeutral, AffectiveClass::kStress,
              AffectiveClass::kAmusement};
  }
  return {};
}

std::string ToString(const ClassPolicy& p) {
  switch (p.kind) {
    case ClassPolicy::Kind::kAll: return "all";
    case ClassPolicy::Kind::kSingle: return std::string(ToString(p.single));
    case ClassPolicy::Kind::kWeighted: {
      std::string s = "weighted(";
      for (AffectiveClass c : kAllClasses) {
        if (c != AffectiveClass::kNeutral) s += ",";
        s += std::string(ToString(c)) + "=" + textio::FormatDouble(p.weights[c]);
      }
      return s + ")";
    }
  }
  return "?";
}

std::size_t MaxAtK(const std::vector<double>& p_at_k) {
  for (std::size_t k = 1; k <= p_at_k.size(); ++k) {
    if (p_at_k[k - 1] >= 1.0 - kSaturationTolerance) return k;
  }
  return p_at_k.size();
}

PrecisionReport PrecisionAtK(const std::vector<RankedTarget>& targets) {
  if (targets.empty()) throw EvalError("no targets to evaluate");
  const std::size_t n = targets.front().list.entries.size();
  std::vector<std::size_t> hits(n + 1, 0);  // hits[r] = targets at rank r
  for (const auto& t : targets) {
    if (t.list.entries.size() != n) {
      throw EvalError("ranked lists differ in length");
    }
    const RankedEntry* e = t.list.Find(t.truth);
    if (e == nullptr) throw EvalError("truth handle " + t.truth + " not ranked");
    ++hits[e->pessimistic_rank];
  }
  PrecisionReport report;
  report.n_targets = targets.size();
  report.p_at_k.resize(n);
  std::size_t cumulative = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    cumulative += hits[k];
    report.p_at_k[k - 1] =
        static_cast<double>(cumulative) / static_cast<double>(targets.size());
  }
  report.max_at_k = MaxAtK(report.p_at_k);
  return report;
}

PrecisionReport ClassWeightedReport(
    const std::map<AffectiveClass, PrecisionReport>& reports,
    const ClassWeights& weights) {
  std::optional<std::size_t> n;
  PrecisionReport out;
  for (AffectiveClass c : kAllClasses) {
    const double w = weights[c];
    auto it = reports.find(c);
    if (it == reports.end()) {
      if (w > 0.0) {
        throw EvalError("no report for class " + std::string(ToString(c)));
      }
      continue;
    }
    const PrecisionReport& r = it->second;
    if (!n) {
      n = r.p_at_k.size();
      out.p_at_k.assign(*n, 0.0);
      out.config = r.config;
      out.n_targets = r.n_targets;
    } else if (r.p_at_k.size() != *n) {
      throw EvalError("class reports cover different k-ranges");
    }
    for (std::size_t k = 0; k < *n; ++k) out.p_at_k[k] += w * r.p_at_k[k];
    out.n_targets = std::min(out.n_targets, r.n_targets);
    out.skipped_targets += r.skipped_targets;
  }
  if (!n) throw EvalError("no class reports to combine");
  out.max_at_k = MaxAtK(out.p_at_k);
  return out;
}

ScoredAttacks ScoreInstances(const InstanceSet& set, const DtwConfig& config,
                             std::size_t threads) {
  ScoredAttacks out;
  out.skipped_targets = set.skipped_targets;
  out.dtw = ToString(config);
  for (const AttackInstance& inst : set.instances) {
    out.tables.push_back(RunAttack(inst, config, threads));
    out.truths.push_back(inst.truth);
  }
  return out;
}

std::vector<RankedTarget> RankAll(const ScoredAttacks& attacks,
                                  RankingMethod method,
                                  const WeightVector& weights) {
  std::vector<RankedTarget> out;
  out.reserve(attacks.tables.size());
  for (std::size_t i = 0; i < attacks.tables.size(); ++i) {
    out.push_back({RankCandidates(attacks.tables[i], method, weights),
                   attacks.truths[i]});
  }
  return out;
}

PrecisionReport Evaluate(const ScoredAttacks& attacks, RankingMethod method,
                         const WeightVector& weights) {
  PrecisionReport report = PrecisionAtK(RankAll(attacks, method, weights));
  report.skipped_targets = attacks.skipped_targets.size();
  report.config.method = std::string(ToString(method));
  report.config.weights = ToString(weights);
  report.config.snippet_fraction = attacks.snippet_fraction;
  report.config.dtw = attacks.dtw;
  return report;
}

std::size_t HitsAtK(const ScoredAttacks& attacks, RankingMethod method,
                    const WeightVector& weights, std::size_t k) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < attacks.tables.size(); ++i) {
    if (RankCandidates(attacks.tables[i], method, weights)
            .InTopK(attacks.truths[i], k)) {
      ++hits;
    }
  }
  return hits;
}


Scenario BuildScenario(
    const std::vector<std::shared_ptr<const SubjectRecord>>& dataset,
    double fraction, const ScenarioOptions& options) {
  Scenario scenario;
  for (const auto& slot : options.class_policy.Slots()) {
    AttackSetup setup;
    setup.fraction = fraction;
    setup.class_filter = slot;
    setup.filter_side = options.filter_side;
    setup.seed = DeriveSeed(options.seed, slot ? ToCode(*slot) : 0);
    setup.skip_insufficient = slot.has_value();
    const InstanceSet set =
        BuildAttackInstances(dataset, options.preprocess, setup);
    ScoredAttacks attacks = ScoreInstances(set, options.dtw, options.threads);
    attacks.snippet_fraction = fraction;
    scenario.emplace(slot, std::move(attacks));
  }
  return scenario;
}

PrecisionReport EvaluateScenario(const Scenario& scenario,
                                 const ClassPolicy& policy,
                                 RankingMethod method,
                                 const WeightVector& weights) {
  auto get = [&](std::optional<AffectiveClass> slot) -> const ScoredAttacks& {
    auto it = scenario.find(slot);
    if (it == scenario.end()) {
      throw EvalError("scenario lacks attacks for class " +
                      std::string(slot ? ToString(*slot) : "all"));
    }
    return it->second;
  };
  PrecisionReport report;
  if (policy.kind == ClassPolicy::Kind::kWeighted) {
    std::map<AffectiveClass, PrecisionReport> per_class;
    for (AffectiveClass c : kAllClasses) {
      if (policy.weights[c] == 0.0 && !scenario.contains(c)) continue;
      per_class.emplace(c, Evaluate(get(c), method, weights));
    }
    report = ClassWeightedReport(per_class, policy.weights);
  } else {
    report = Evaluate(get(policy.Slots().front()), method, weights);
  }
  report.config.class_policy = ToString(policy);
  return report;
}

std::vector<std::vector<Sensor>> SensorCombinations() {
  static constexpr std::array<Sensor, 4> kOrder = {Sensor::kBvp, Sensor::kEda,
                                                   Sensor::kAcc, Sensor::kTemp};
  std::vector<std::vector<Sensor>> out;
  for (std::size_t size = 1; size <= kOrder.size(); ++size) {
    // prev_permutation over a leading-ones mask walks index tuples in
    // lexicographic order.
    std::array<bool, 4> mask{};
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(size), true);
    do {
      std::vector<Sensor> combo;
      for (std::size_t b = 0; b < kOrder.size(); ++b) {
        if (mask[b]) combo.push_back(kOrder[b]);
      }
      out.push_back(std::move(combo));
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }
  return out;
}

std::string CombinationName(const std::vector<Sensor>& sensors) {
  std::string name;
  for (Sensor s : sensors) {
    if (!name.empty()) name += "+";
    name += ToString(s);
  }
  return name;
}

std::vector<NamedReport> SweepSensorCombinations(const Scenario& scenario,
                                                 const ClassPolicy& policy,
                                                 RankingMethod method) {
  std::vector<NamedReport> out;
  for (const auto& combo : SensorCombinations()) {
    PrecisionReport r =
        EvaluateScenario(scenario, policy, method, WeightVector::Indicator(combo));
    r.config.label = CombinationName(combo);
    out.push_back({CombinationName(combo), std::move(r)});
  }
  return out;
}

std::vector<NamedReport> SweepSensorCombinations(const InstanceSet& instances,
                                                 const DtwConfig& config,
                                                 RankingMethod method,
                                                 std::size_t threads) {
  if (instances.instances.empty()) throw EvalError("no attack instances");
  Scenario scenario;
  const auto cls = instances.instances.front().candidate_class;
  scenario.emplace(cls, ScoreInstances(instances, config, threads));
  const ClassPolicy policy = cls ? ClassPolicy::Single(*cls) : ClassPolicy::All();
  auto out = SweepSensorCombinations(scenario, policy, method);
  return out;
}

std::vector<std::pair<double, PrecisionReport>> SweepSetSizes(
    const std::vector<std::shared_ptr<const SubjectRecord>>& dataset,
    const std::vector<double>& fractions, const ScenarioOptions& options,
    RankingMethod method, const WeightVector& weights) {
  if (fractions.empty()) throw ConfigError("fraction list is empty");
  for (double f : fractions) {
    if (!(f > 0.0 && f < 1.0)) {
      throw ConfigError("snippet fractions must lie in (0, 1)");
    }
  }
  std::vector<std::pair<double, PrecisionReport>> out;
  for (double f : fractions) {
    const Scenario scenario = BuildScenario(dataset, f, options);
    PrecisionReport r =
        EvaluateScenario(scenario, options.class_policy, method, weights);
    r.config.snippet_fraction = f;
    out.emplace_back(f, std::move(r));
  }
  return out;
}

std::vector<WeightVector> EnumerateWeightGrid(double step) {
  if (!(step > 0.0 && step <= 1.0)) throw ConfigError("grid step must lie in (0, 1]");
  const double q = std::round(1.0 / step);
  if (std::abs(q * step - 1.0) > 1e-9 || q > 200.0) {
    throw ConfigError("grid step must divide 1 into at most 200 parts");
  }
  const int parts = static_cast<int>(q);
  std::vector<WeightVector> out;
  for (int acc = 0; acc <= parts; ++acc) {
    for (int bvp = 0; bvp <= parts - acc; ++bvp) {
      for (int eda = 0; eda <= parts - acc - bvp; ++eda) {
        const int temp = parts - acc - bvp - eda;
        out.emplace_back(bvp / q, eda / q, temp / q, acc / q);
      }
    }
  }
  return out;
}

GridOptimum GridSearch(const ScoredAttacks& attacks, double step,
                       std::size_t objective_k, RankingMethod method,
                       std::size_t threads) {
  const auto grid = EnumerateWeightGrid(step);
  if (attacks.tables.empty()) throw EvalError("no attacks to optimise over");
  const std::size_t n = attacks.tables.front().rows.size();
  if (objective_k < 1 || objective_k > n) {
    throw ConfigError("objective k must lie in 1.." + std::to_string(n));
  }
  // Compare integer hit counts so ties between vectors are exact.
  std::vector<std::size_t> hits(grid.size());
  ParallelFor(grid.size(), threads, [&](std::size_t v) {
    hits[v] = HitsAtK(attacks, method, grid[v], objective_k);
  });
  const std::size_t best = *std::max_element(hits.begin(), hits.end());
  GridOptimum opt;
  opt.objective_k = objective_k;
  opt.evaluated = grid.size();
  opt.best_p =
      static_cast<double>(best) / static_cast<double>(attacks.tables.size());
  for (std::size_t v = 0; v < grid.size(); ++v) {
    if (hits[v] == best) opt.vectors.push_back(grid[v]);
  }
  return opt;
}

std::map<AffectiveClass, GridOptimum> GridSearchWeights(
    const std::map<AffectiveClass, ScoredAttacks>& per_class, double step,
    std::size_t objective_k, RankingMethod method, std::size_t threads) {
  std::map<AffectiveClass, GridOptimum> out;
  for (const auto& [cls, attacks] : per_class) {
    out.emplace(cls, GridSearch(attacks, step, objective_k, method, threads));
  }
  return out;
}

std::vector<double> RandomBaseline(std::size_t n_candidates) {
  if (n_candidates == 0) throw EvalError("baseline needs at least one candidate");
  std::vector<double> p(n_candidates);
  for (std::size_t k = 1; k <= n_candidates; ++k) {
    p[k - 1] = static_cast<double>(k) / static_cast<double>(n_candidates);
  }
  return p;
}

nlohmann::ordered_json ToJson(const PrecisionReport& report) {
  nlohmann::ordered_json doc;
  doc["config"] = {{"label", report.config.label},
                   {"method", report.config.method},
                   {"class_policy", report.config.class_policy},
                   {"weights", report.config.weights},
                   {"snippet_fraction", report.config.snippet_fraction},
                   {"dtw", report.config.dtw}};
  doc["n_targets"] = report.n_targets;
  doc["skipped_targets"] = report.skipped_targets;
  doc["max_at_k"] = report.max_at_k;
  doc["p_at_k"] = report.p_at_k;
  return doc;
}

void WriteReportJson(const PrecisionReport& report, std::ostream& out) {
  out << ToJson(report).dump(2) << '\n';
}

void WriteReportsCsv(const std::vector<NamedReport>& reports, std::ostream& out) {
  std::size_t n = 0;
  for (const auto& r : reports) n = std::max(n, r.report.p_at_k.size());
  out << "name,n_targets,skipped,max_at_k";
  for (std::size_t k = 1; k <= n; ++k) out << ",p_at_" << k;
  out << '\n';
  std::string line;
  for (const auto& r : reports) {
    line = r.name + ',' + std::to_string(r.report.n_targets) + ',' +
           std::to_string(r.report.skipped_targets) + ',' +
           std::to_string(r.report.max_at_k);
    for (double p : r.report.p_at_k) {
      line += ',';
      textio::AppendDouble(line, p);
    }
    out << line << '\n';
  }
}

}  // namespace reident
