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


#include "reident/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include "reident/error.hpp"
#include "reident/random.hpp"
#include "text_io.hpp"

namespace reident {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr double kDefaultAttackFraction = 0.0001;

// Slot labels used in file names and report rows.
std::string SlotName(const std::optional<AffectiveClass>& slot) {
  return slot ? std::string(ToString(*slot)) : "all";
}

void Log(std::ostream* log, const std::string& line) {
  if (log != nullptr) *log << line << '\n' << std::flush;
}

std::ofstream OpenOut(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out = OpenOut(path);
  out << text;
}

template <typename T>
T Require(const std::optional<T>& v, const std::string& what,
          const std::string& got) {
  if (!v) throw ConfigError("unknown " + what + ": '" + got + "'");
  return *v;
}

template <typename T>
T Get(const json& doc, const char* key, const T& fallback) {
  if (!doc.contains(key) || doc.at(key).is_null()) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

ordered_json RatesToJson(const std::map<Sensor, double>& rates) {
  ordered_json out = ordered_json::object();
  for (const auto& [s, r] : rates) out[std::string(ToString(s))] = r;
  return out;
}

std::map<Sensor, double> RatesFromJson(const json& doc) {
  std::map<Sensor, double> rates = DefaultRates();
  for (const auto& [key, value] : doc.items()) {
    const Sensor s = Require(ParseSensor(key), "sensor", key);
    if (!value.is_number()) throw ConfigError("rate for " + key + " is not a number");
    rates[s] = value.get<double>();
  }
  return rates;
}

std::vector<Sensor> SensorsFromJson(const json& doc) {
  std::vector<Sensor> out;
  for (const auto& item : doc) {
    const std::string name = item.get<std::string>();
    out.push_back(Require(ParseSensor(name), "sensor", name));
  }
  return out;
}

ScenarioOptions MakeOptions(const RunConfig& config) {
  ScenarioOptions options;
  options.preprocess = config.preprocess;
  options.dtw = config.dtw;
  options.class_policy = config.class_policy;
  options.filter_side = config.filter_side;
  options.seed = DeriveSeed(config.seed, kStreamAnonymization);
  options.threads = config.threads;
  return options;
}

std::vector<SubjectRecord> LoadRaw(const RunConfig& config, std::ostream* log) {
  if (config.synthetic) {
    Log(log, "generating " + std::to_string(config.synthetic->n_subjects) +
                 " synthetic subjects");
    return GenerateSynthetic(*config.synthetic);
  }
  Log(log, "loading " + config.data_dir);
  return LoadDataset(ReadManifest(config.data_dir));
}

std::vector<std::shared_ptr<const SubjectRecord>> Prepare(
    const RunConfig& config, std::ostream* log) {
  std::vector<SubjectRecord> raw = LoadRaw(config, log);
  Log(log, "preprocessing " + std::to_string(raw.size()) + " subjects");
  return Share(PreprocessDataset(raw, config.preprocess, config.threads));
}

fs::path BeginOutput(const RunConfig& config) {
  const fs::path dir = config.output_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output dir " + dir.string());
  WriteText(dir / "run_config.json", ToJson(config).dump(2) + "\n");
  return dir;
}

// Per-slot weights: fixed, or the first grid optimum at the first objective k.
std::map<std::optional<AffectiveClass>, WeightVector> SlotWeights(
    const RunConfig& config, const Scenario& scenario) {
  std::map<std::optional<AffectiveClass>, WeightVector> out;
  for (const auto& [slot, attacks] : scenario) {
    if (config.weights.mode == WeightSpec::Mode::kGrid) {
      const GridOptimum opt =
          GridSearch(attacks, config.grid_step, config.objective_ks.front(),
                     config.method, config.threads);
      out.emplace(slot, opt.vectors.front());
    } else {
      out.emplace(slot, config.weights.Resolve());
    }
  }
  return out;
}

// Combines per-slot reports according to the class policy.
PrecisionReport Combine(
    const RunConfig& config,
    const std::map<std::optional<AffectiveClass>, PrecisionReport>& reports) {
  if (config.class_policy.kind != ClassPolicy::Kind::kWeighted) {
    return reports.begin()->second;
  }
  std::map<AffectiveClass, PrecisionReport> by_class;
  for (const auto& [slot, r] : reports) by_class.emplace(*slot, r);
  return ClassWeightedReport(by_class, config.class_policy.weights);
}

PrecisionReport MeanOf(const PrecisionReport& a, const PrecisionReport& b) {
  if (a.p_at_k.size() != b.p_at_k.size()) {
    throw EvalError("cannot average reports over different candidate counts");
  }
  PrecisionReport out = a;
  for (std::size_t i = 0; i < out.p_at_k.size(); ++i) {
    out.p_at_k[i] = 0.5 * (a.p_at_k[i] + b.p_at_k[i]);
  }
  out.max_at_k = MaxAtK(out.p_at_k);
  out.config.method = "mean(rank,score)";
  return out;
}

PrecisionReport Labelled(PrecisionReport r, const std::string& label) {
  r.config.label = label;
  return r;
}

void WriteReports(const fs::path& stem, const std::vector<NamedReport>& rows) {
  {
    std::ofstream out = OpenOut(stem.string() + ".csv");
    WriteReportsCsv(rows, out);
  }
  ordered_json doc = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json item = ToJson(row.report);
    item["name"] = row.name;
    doc.push_back(std::move(item));
  }
  WriteText(stem.string() + ".json", doc.dump(2) + "\n");
}

PrecisionReport BaselineReport(std::size_t n_candidates) {
  PrecisionReport r;
  r.p_at_k = RandomBaseline(n_candidates);
  r.max_at_k = MaxAtK(r.p_at_k);
  r.config.method = "random";
  r.config.label = "random_baseline";
  return r;
}

std::string WeightColumns(const WeightVector& w) {
  std::string s;
  for (Sensor sensor : {Sensor::kAcc, Sensor::kBvp, Sensor::kEda, Sensor::kTemp}) {
    s += "," + textio::FormatDouble(w[sensor]);
  }
  return s;
}

// Middle segment of every aligned series, or of the longest run of a class.
SubjectRecord Crop(const SubjectRecord& record, std::size_t length,
                   std::optional<AffectiveClass> cls) {
  std::size_t begin = 0, end = record.length();
  if (cls) {
    std::tie(begin, end) = LongestRun(record.series.begin()->second.labels, *cls);
    if (begin == end) {
      throw PreprocessError("subject " + record.subject_id + " has no " +
                            std::string(ToString(*cls)) + " data");
    }
  }
  if (length > 0 && end - begin > length) {
    begin += (end - begin - length) / 2;
    end = begin + length;
  }
  SubjectRecord out;
  out.subject_id = record.subject_id;
  for (const auto& [m, s] : record.series) {
    SensorSeries c = s;
    c.values.assign(s.values.begin() + begin, s.values.begin() + end);
    c.labels.assign(s.labels.begin() + begin, s.labels.begin() + end);
    out.series.emplace(m, std::move(c));
  }
  return out;
}

}  // namespace

WeightVector WeightSpec::Resolve() const {
  switch (mode) {
    case Mode::kEqual: return WeightVector::Equal();
    case Mode::kSensors: return WeightVector::Indicator(sensors);
    case Mode::kExplicit: return values;
    case Mode::kGrid: break;
  }
  throw ConfigError("grid weights have no fixed vector");
}

std::string_view ToString(WeightSpec::Mode m) {
  switch (m) {
    case WeightSpec::Mode::kEqual: return "equal";
    case WeightSpec::Mode::kSensors: return "sensors";
    case WeightSpec::Mode::kExplicit: return "explicit";
    case WeightSpec::Mode::kGrid: return "grid";
  }
  return "?";
}

ordered_json ToJson(const RunConfig& c) {
  ordered_json doc;
  if (c.synthetic) {
    const SyntheticConfig& s = *c.synthetic;
    ordered_json syn;
    syn["n_subjects"] = s.n_subjects;
    syn["duration_s"] = s.duration_s;
    if (c.synthetic_seed_set) syn["seed"] = s.seed;
    syn["separability"] = s.separability;
    syn["rates_hz"] = RatesToJson(s.rate_hz);
    doc["synthetic"] = syn;
  } else {
    doc["data_dir"] = c.data_dir;
  }
  doc["preprocess"] = {
      {"rate_hz", c.preprocess.common_rate_hz},
      {"window_ms", c.preprocess.window_ms},
      {"normalize", std::string(ToString(c.preprocess.normalization))}};
  ordered_json dtw;
  dtw["step_pattern"] = std::string(ToString(c.dtw.step_pattern));
  dtw["normalization"] = std::string(ToString(c.dtw.normalization));
  dtw["band"] = c.dtw.band ? ordered_json(*c.dtw.band) : ordered_json(nullptr);
  doc["dtw"] = dtw;
  doc["method"] = std::string(ToString(c.method));
  ordered_json cls;
  switch (c.class_policy.kind) {
    case ClassPolicy::Kind::kAll: cls["mode"] = "all"; break;
    case ClassPolicy::Kind::kSingle:
      cls["mode"] = std::string(ToString(c.class_policy.single));
      break;
    case ClassPolicy::Kind::kWeighted: cls["mode"] = "weighted"; break;
  }
  cls["weights"] = {c.class_policy.weights[AffectiveClass::kNeutral],
                    c.class_policy.weights[AffectiveClass::kStress],
                    c.class_policy.weights[AffectiveClass::kAmusement]};
  cls["filter_side"] = std::string(ToString(c.filter_side));
  doc["class"] = cls;
  ordered_json w;
  w["mode"] = std::string(ToString(c.weights.mode));
  if (c.weights.mode == WeightSpec::Mode::kSensors) {
    ordered_json names = ordered_json::array();
    for (Sensor s : c.weights.sensors) names.push_back(std::string(ToString(s)));
    w["sensors"] = names;
  } else if (c.weights.mode == WeightSpec::Mode::kExplicit) {
    w["values"] = ordered_json::object();
    for (Sensor s : kAllSensors) {
      w["values"][std::string(ToString(s))] = c.weights.values[s];
    }
  }
  doc["weights"] = w;
  doc["fractions"] =
      c.fractions ? ordered_json(*c.fractions) : ordered_json(nullptr);
  doc["sweep_kinds"] = c.sweep_kinds;
  doc["grid_step"] = c.grid_step;
  doc["objective_ks"] = c.objective_ks;
  doc["heatmap_segment_s"] = c.heatmap_segment_s;
  doc["output_dir"] = c.output_dir;
  doc["seed"] = c.seed;
  doc["threads"] = c.threads;
  return doc;
}

RunConfig RunConfigFromJson(const json& doc) {
  if (!doc.is_object()) throw ConfigError("run config must be a JSON object");
  RunConfig c;
  try {
    c.data_dir = Get<std::string>(doc, "data_dir", "");
    if (doc.contains("synthetic") && !doc.at("synthetic").is_null()) {
      const json& s = doc.at("synthetic");
      SyntheticConfig syn;
      syn.n_subjects = Get<std::uint32_t>(s, "n_subjects", syn.n_subjects);
      syn.duration_s = Get<double>(s, "duration_s", syn.duration_s);
      syn.separability = Get<double>(s, "separability", syn.separability);
      if (s.contains("seed") && !s.at("seed").is_null()) {
        syn.seed = s.at("seed").get<std::uint64_t>();
        c.synthetic_seed_set = true;
      }
      if (s.contains("rates_hz")) syn.rate_hz = RatesFromJson(s.at("rates_hz"));
      c.synthetic = syn;
    }
    if (doc.contains("preprocess")) {
      const json& p = doc.at("preprocess");
      c.preprocess.common_rate_hz =
          Get<double>(p, "rate_hz", c.preprocess.common_rate_hz);
      c.preprocess.window_ms = Get<double>(p, "window_ms", c.preprocess.window_ms);
      const std::string n =
          Get<std::string>(p, "normalize", std::string(ToString(c.preprocess.normalization)));
      c.preprocess.normalization = Require(ParseNormalization(n), "normalization", n);
    }
    if (doc.contains("dtw")) {
      const json& d = doc.at("dtw");
      const std::string sp =
          Get<std::string>(d, "step_pattern", std::string(ToString(c.dtw.step_pattern)));
      c.dtw.step_pattern = Require(ParseStepPattern(sp), "step pattern", sp);
      const std::string nm =
          Get<std::string>(d, "normalization", std::string(ToString(c.dtw.normalization)));
      c.dtw.normalization =
          Require(ParseDistanceNormalization(nm), "dtw normalization", nm);
      if (d.contains("band") && !d.at("band").is_null()) {
        c.dtw.band = d.at("band").get<std::size_t>();
      }
    }
    const std::string method = Get<std::string>(doc, "method", "score");
    c.method = Require(ParseRankingMethod(method), "ranking method", method);
    if (doc.contains("class")) {
      const json& cl = doc.at("class");
      ClassWeights weights;
      if (cl.contains("weights")) {
        const auto w = cl.at("weights").get<std::vector<double>>();
        if (w.size() != 3) throw ConfigError("class weights need three values");
        weights = ClassWeights(w[0], w[1], w[2]);
      }
      const std::string mode = Get<std::string>(cl, "mode", "all");
      if (mode == "all") {
        c.class_policy = ClassPolicy::All();
      } else if (mode == "weighted") {
        c.class_policy = ClassPolicy::Weighted(weights);
      } else {
        c.class_policy =
            ClassPolicy::Single(Require(ParseAffectiveClass(mode), "class", mode));
      }
      c.class_policy.weights = weights;
      const std::string side = Get<std::string>(cl, "filter_side", "both");
      c.filter_side = Require(ParseClassFilterSide(side), "class filter side", side);
    }
    if (doc.contains("weights")) {
      const json& w = doc.at("weights");
      const std::string mode = Get<std::string>(w, "mode", "equal");
      if (mode == "equal") {
        c.weights.mode = WeightSpec::Mode::kEqual;
      } else if (mode == "sensors") {
        c.weights.mode = WeightSpec::Mode::kSensors;
        c.weights.sensors = SensorsFromJson(w.at("sensors"));
        WeightVector::Indicator(c.weights.sensors);  // validates
      } else if (mode == "explicit") {
        c.weights.mode = WeightSpec::Mode::kExplicit;
        const json& v = w.at("values");
        auto at = [&](const char* k) { return Get<double>(v, k, 0.0); };
        c.weights.values = WeightVector(at("BVP"), at("EDA"), at("TEMP"), at("ACC"));
      } else if (mode == "grid") {
        c.weights.mode = WeightSpec::Mode::kGrid;
      } else {
        throw ConfigError("unknown weights mode: '" + mode + "'");
      }
    }
    if (doc.contains("fractions") && !doc.at("fractions").is_null()) {
      c.fractions = doc.at("fractions").get<std::vector<double>>();
    }
    c.sweep_kinds = Get(doc, "sweep_kinds", c.sweep_kinds);
    c.grid_step = Get(doc, "grid_step", c.grid_step);
    c.objective_ks = Get(doc, "objective_ks", c.objective_ks);
    c.heatmap_segment_s = Get(doc, "heatmap_segment_s", c.heatmap_segment_s);
    c.output_dir = Get(doc, "output_dir", c.output_dir);
    c.seed = Get(doc, "seed", c.seed);
    c.threads = Get(doc, "threads", c.threads);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed run config: ") + e.what());
  }
  return c;
}

RunConfig ReadRunConfig(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  try {
    return RunConfigFromJson(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
}

RunConfig Resolve(RunConfig c, std::string_view command) {
  if (c.synthetic) {
    if (!c.data_dir.empty()) {
      throw ConfigError("choose either a data dir or a synthetic dataset");
    }
    if (!c.synthetic_seed_set) {
      c.synthetic->seed = DeriveSeed(c.seed, kStreamSynthetic);
      c.synthetic_seed_set = true;
    }
    CheckSyntheticConfig(*c.synthetic);
  } else if (command != "synth") {
    if (c.data_dir.empty()) {
      if (const char* env = std::getenv("REIDENT_DATA_DIR"); env && *env) {
        c.data_dir = env;
      }
    }
    if (c.data_dir.empty()) {
      throw ConfigError("no data source: pass a data dir, set REIDENT_DATA_DIR, "
                        "or use a synthetic dataset");
    }
  } else {
    throw ConfigError("synth needs a synthetic dataset configuration");
  }
  CheckPreprocessConfig(c.preprocess);
  if (!c.fractions) {
    c.fractions = command == "sweep" ? kDefaultFractions
                                     : std::vector<double>{kDefaultAttackFraction};
  }
  if (c.fractions->empty()) throw ConfigError("fraction list is empty");
  for (double f : *c.fractions) {
    if (!(f > 0.0 && f < 1.0)) throw ConfigError("snippet fractions must lie in (0, 1)");
  }
  if ((command == "attack" || command == "optimize") && c.fractions->size() != 1) {
    throw ConfigError(std::string(command) + " takes exactly one snippet fraction");
  }
  if (c.weights.mode == WeightSpec::Mode::kGrid || command == "optimize") {
    EnumerateWeightGrid(c.grid_step);  // validates the step
    if (c.objective_ks.empty()) throw ConfigError("objective k list is empty");
    for (std::size_t k : c.objective_ks) {
      if (k == 0) throw ConfigError("objective k must be positive");
    }
  }
  if (command == "optimize" && c.weights.mode == WeightSpec::Mode::kGrid) {
    throw ConfigError("optimize compares against fixed weights; grid is not one");
  }
  if (command == "sweep") {
    if (c.sweep_kinds.empty()) throw ConfigError("no sweep kind selected");
    for (const auto& k : c.sweep_kinds) {
      if (k != "sensors" && k != "sizes" && k != "methods" && k != "classes") {
        throw ConfigError("unknown sweep kind: '" + k + "'");
      }
    }
    if (c.weights.mode == WeightSpec::Mode::kGrid) {
      throw ConfigError("sweeps need fixed weights");
    }
  }
  if (!(c.heatmap_segment_s >= 0.0) || !std::isfinite(c.heatmap_segment_s)) {
    throw ConfigError("heatmap segment must be a non-negative number of seconds");
  }
  if (c.output_dir.empty()) throw ConfigError("output dir is empty");
  return c;
}

void CmdAttack(const RunConfig& input, std::ostream* log) {
  const RunConfig config = Resolve(input, "attack");
  const fs::path dir = BeginOutput(config);
  const auto dataset = Prepare(config, log);
  const double fraction = config.fractions->front();
  Log(log, "attacking with snippet fraction " + textio::FormatDouble(fraction));
  const Scenario scenario = BuildScenario(dataset, fraction, MakeOptions(config));
  const auto weights = SlotWeights(config, scenario);

  std::map<std::optional<AffectiveClass>, PrecisionReport> reports;
  std::vector<NamedReport> rows;
  for (const auto& [slot, attacks] : scenario) {
    const std::string name = SlotName(slot);
    {
      std::ofstream out = OpenOut(dir / ("score_tables_" + name + ".json"));
      WriteScoreTablesJson(attacks.tables, out);
    }
    {
      std::ofstream out = OpenOut(dir / ("score_tables_" + name + ".csv"));
      WriteScoreTablesCsv(attacks.tables, out);
    }
    const WeightVector& w = weights.at(slot);
    {
      std::ofstream out = OpenOut(dir / ("ranked_lists_" + name + ".csv"));
      out << "target,handle,aggregate,realistic_rank,pessimistic_rank\n";
      const auto ranked = RankAll(attacks, config.method, w);
      for (std::size_t t = 0; t < ranked.size(); ++t) {
        WriteRankedListCsv(ranked[t].list, out, attacks.tables[t].target_id);
      }
    }
    for (const auto& table : attacks.tables) {
      for (const auto& warning : table.warnings) Log(log, "warning: " + warning);
    }
    PrecisionReport r = Labelled(Evaluate(attacks, config.method, w), name);
    reports.emplace(slot, r);
    rows.push_back({name, std::move(r)});
  }
  PrecisionReport combined = Labelled(Combine(config, reports), "combined");
  const std::size_t n = combined.n_candidates();
  rows.push_back({"combined", combined});
  rows.push_back({"random_baseline", BaselineReport(n)});
  WriteReports(dir / "report", rows);
  Log(log, "P@1 = " + textio::FormatDouble(combined.at(1)) +
               ", max@k = " + std::to_string(combined.max_at_k));
}

void CmdSweep(const RunConfig& input, std::ostream* log) {
  const RunConfig config = Resolve(input, "sweep");
  const fs::path dir = BeginOutput(config);
  const auto dataset = Prepare(config, log);
  const WeightVector weights = config.weights.Resolve();
  const ScenarioOptions options = MakeOptions(config);
  auto wants = [&](const char* kind) {
    return std::find(config.sweep_kinds.begin(), config.sweep_kinds.end(),
                     kind) != config.sweep_kinds.end();
  };
  const double first = config.fractions->front();
  std::optional<Scenario> scenario;
  auto base = [&]() -> const Scenario& {
    if (!scenario) scenario = BuildScenario(dataset, first, options);
    return *scenario;
  };

  if (wants("sensors")) {
    Log(log, "sweeping sensor combinations");
    WriteReports(dir / "sensor_combinations",
                 SweepSensorCombinations(base(), config.class_policy, config.method));
  }
  if (wants("methods")) {
    Log(log, "comparing ranking methods");
    const PrecisionReport rank = EvaluateScenario(
        base(), config.class_policy, RankingMethod::kRank, weights);
    const PrecisionReport score = EvaluateScenario(
        base(), config.class_policy, RankingMethod::kScore, weights);
    WriteReports(dir / "methods", {{"rank", Labelled(rank, "rank")},
                                   {"score", Labelled(score, "score")},
                                   {"mean", Labelled(MeanOf(rank, score), "mean")}});
  }
  if (wants("classes")) {
    Log(log, "comparing affective classes");
    ScenarioOptions per_class = options;
    per_class.class_policy = ClassPolicy::Weighted(config.class_policy.weights);
    const Scenario classes =
        config.class_policy.kind == ClassPolicy::Kind::kWeighted
            ? base()
            : BuildScenario(dataset, first, per_class);
    std::vector<NamedReport> rows;
    std::map<AffectiveClass, PrecisionReport> by_class;
    for (AffectiveClass c : kAllClasses) {
      PrecisionReport r = Labelled(
          Evaluate(classes.at(c), config.method, weights), std::string(ToString(c)));
      by_class.emplace(c, r);
      rows.push_back({std::string(ToString(c)), std::move(r)});
    }
    rows.push_back({"mean", Labelled(ClassWeightedReport(by_class, ClassWeights(
                                         1.0 / 3, 1.0 / 3, 1.0 / 3)),
                                     "mean")});
    rows.push_back({"weighted_mean",
                    Labelled(ClassWeightedReport(by_class, config.class_policy.weights),
                             "weighted_mean")});
    WriteReports(dir / "classes", rows);
  }
  if (wants("sizes")) {
    std::vector<NamedReport> rows;
    for (double f : *config.fractions) {
      Log(log, "snippet fraction " + textio::FormatDouble(f));
      const Scenario s = (scenario && f == first) ? *scenario
                                                  : BuildScenario(dataset, f, options);
      PrecisionReport r =
          EvaluateScenario(s, config.class_policy, config.method, weights);
      r.config.snippet_fraction = f;
      rows.push_back({textio::FormatDouble(f), std::move(r)});
    }
    WriteReports(dir / "set_sizes", rows);
  }
}

void CmdOptimize(const RunConfig& input, std::ostream* log) {
  const RunConfig config = Resolve(input, "optimize");
  const fs::path dir = BeginOutput(config);
  const auto dataset = Prepare(config, log);
  const Scenario scenario =
      BuildScenario(dataset, config.fractions->front(), MakeOptions(config));
  const WeightVector naive = config.weights.Resolve();
  const auto grid = EnumerateWeightGrid(config.grid_step);

  std::ofstream optimal = OpenOut(dir / "optimal_weights.csv");
  std::ofstream radar = OpenOut(dir / "radar.csv");
  optimal << "class,k,ACC,BVP,EDA,TEMP,p_at_k\n";
  radar << "class,k,ACC,BVP,EDA,TEMP,multiplicity\n";

  // Each class uses its own optimum per k.
  std::map<std::optional<AffectiveClass>, std::vector<double>> best_p;
  std::map<std::optional<AffectiveClass>, std::size_t> best_max;
  std::map<std::optional<AffectiveClass>, PrecisionReport> naive_reports;
  for (const auto& [slot, attacks] : scenario) {
    const std::string name = SlotName(slot);
    naive_reports.emplace(slot, Evaluate(attacks, config.method, naive));
    for (std::size_t k : config.objective_ks) {
      Log(log, "grid search for " + name + " at k=" + std::to_string(k));
      const GridOptimum opt =
          GridSearch(attacks, config.grid_step, k, config.method, config.threads);
      best_p[slot].push_back(opt.best_p);
      for (const WeightVector& w : opt.vectors) {
        optimal << name << ',' << k << WeightColumns(w) << ','
                << textio::FormatDouble(opt.best_p) << '\n';
      }
      radar << name << ',' << k << WeightColumns(opt.vectors.front()) << ','
            << opt.vectors.size() << '\n';
    }
    std::size_t lowest = std::numeric_limits<std::size_t>::max();
    for (const WeightVector& w : grid) {
      lowest = std::min(lowest, Evaluate(attacks, config.method, w).max_at_k);
    }
    best_max[slot] = lowest;
  }

  const PrecisionReport naive_combined = Combine(config, naive_reports);
  const std::size_t n = naive_combined.n_candidates();
  std::ofstream cmp = OpenOut(dir / "comparison.csv");
  cmp << "metric,naive,weighted,random\n";
  for (std::size_t i = 0; i < config.objective_ks.size(); ++i) {
    const std::size_t k = config.objective_ks[i];
    if (k > n) throw ConfigError("objective k exceeds the candidate count");
    double weighted = 0.0;
    for (const auto& [slot, ps] : best_p) {
      const double w = slot ? config.class_policy.weights[*slot] : 1.0;
      weighted += w * ps[i];
    }
    cmp << "p_at_" << k << ',' << textio::FormatDouble(naive_combined.at(k)) << ','
        << textio::FormatDouble(weighted) << ','
        << textio::FormatDouble(static_cast<double>(k) / static_cast<double>(n))
        << '\n';
  }
  // The combination saturates only once every contributing class does.
  std::size_t weighted_max = 0;
  for (const auto& [slot, m] : best_max) {
    if (!slot || config.class_policy.weights[*slot] > 0.0) {
      weighted_max = std::max(weighted_max, m);
    }
  }
  cmp << "max_at_k," << naive_combined.max_at_k << ',' << weighted_max << ','
      << n << '\n';
}

void CmdHeatmap(const RunConfig& input, std::ostream* log) {
  const RunConfig config = Resolve(input, "heatmap");
  const fs::path dir = BeginOutput(config);
  const auto dataset = Prepare(config, log);
  if (config.class_policy.kind == ClassPolicy::Kind::kWeighted) {
    throw ConfigError("heatmap takes all data or a single class");
  }
  const std::optional<AffectiveClass> cls =
      config.class_policy.kind == ClassPolicy::Kind::kSingle
          ? std::optional<AffectiveClass>(config.class_policy.single)
          : std::nullopt;
  const auto length = static_cast<std::size_t>(
      std::floor(config.heatmap_segment_s * config.preprocess.common_rate_hz + 1e-9));
  std::vector<SubjectRecord> cropped;
  for (const auto& record : dataset) cropped.push_back(Crop(*record, length, cls));

  std::vector<SimilarityMatrix> matrices;
  for (Sensor s : kAllSensors) {
    Log(log, "pairwise " + std::string(ToString(s)));
    matrices.push_back(PairwiseMatrix(cropped, s, config.dtw, config.threads));
    std::ofstream out = OpenOut(dir / ("heatmap_" + std::string(ToString(s)) + ".csv"));
    WriteMatrixCsv(matrices.back(), out);
  }
  std::ofstream out = OpenOut(dir / "heatmap_aggregate.csv");
  WriteMatrixCsv(MeanMatrix(matrices), out);
}

void CmdSynth(const RunConfig& input, std::ostream* log) {
  const RunConfig config = Resolve(input, "synth");
  const std::vector<SubjectRecord> records = GenerateSynthetic(*config.synthetic);
  Log(log, "writing " + std::to_string(records.size()) + " subjects to " +
               config.output_dir);
  WriteDataset(records, config.output_dir);
  WriteText(fs::path(config.output_dir) / "run_config.json",
            ToJson(config).dump(2) + "\n");
}

std::vector<std::string> CmdValidate(const RunConfig& input) {
  const RunConfig config = Resolve(input, "validate");
  std::vector<std::string> problems;
  try {
    const std::vector<SubjectRecord> records = LoadRaw(config, nullptr);
    for (const auto& r : records) {
      for (const auto& v : ValidateSubject(r)) problems.push_back(r.subject_id + ": " + v);
    }
  } catch (const IngestError& e) {
    problems.push_back(e.what());
  }
  return problems;
}

}  // namespace reident
