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


// Command-line front end. Builds a JSON run configuration from --config and
// flags, then hands it to the C API.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "reident/reident.h"

namespace {

using nlohmann::json;

constexpr int kExitIngest = 1;
constexpr int kExitConfig = 2;
constexpr int kExitEval = 3;

struct ConfigError {
  std::string message;
};

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, item.find_last_not_of(" \t") - b + 1));
  }
  return out;
}

double ToDouble(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError{"bad number for " + what + ": '" + s + "'"};
}

std::uint64_t ToUint(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used == s.size() && s.front() != '-') return v;
  } catch (const std::exception&) {
  }
  throw ConfigError{"bad integer for " + what + ": '" + s + "'"};
}

struct Flags {
  std::string config_file;
  std::optional<std::string> data;
  std::optional<std::vector<std::string>> synthetic;
  std::optional<double> rate, window_ms;
  std::optional<std::string> normalize, snippet_frac, cls, class_weights,
      filter_side, sensors, weights, method, step_pattern, dtw_normalize,
      objective_k, kinds, out;
  bool grid = false;
  std::optional<std::int64_t> band;
  std::optional<double> grid_step, segment_s;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  bool quiet = false;
};

void AddFlags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_file, "Serialized run configuration (JSON)")
      ->check(CLI::ExistingFile);
  app->add_option("--data", f.data, "Dataset directory (default: $REIDENT_DATA_DIR)");
  app->add_option("--synthetic", f.synthetic,
                  "Synthetic dataset: n=15 dur=2160 seed=7 sep=0.8")
      ->expected(0, -1);
  app->add_option("--rate", f.rate, "Common resampling rate in Hz");
  app->add_option("--window-ms", f.window_ms, "Window length in milliseconds");
  app->add_option("--normalize", f.normalize, "zscore or none");
  app->add_option("--snippet-frac", f.snippet_frac,
                  "Attacker snippet fraction(s), comma separated");
  app->add_option("--class", f.cls, "all, neutral, stress, amusement or weighted");
  app->add_option("--class-weights", f.class_weights,
                  "Neutral,stress,amusement weights for --class weighted");
  app->add_option("--class-filter-side", f.filter_side, "both or attacker");
  app->add_option("--sensors", f.sensors, "Equal weights over these sensors, e.g. bvp,acc");
  app->add_option("--weights", f.weights, "Explicit weights, e.g. bvp=0.5,acc=0.5");
  app->add_flag("--grid", f.grid, "Grid-search the sensor weights");
  app->add_option("--method", f.method, "score or rank");
  app->add_option("--step-pattern", f.step_pattern, "symmetric1 or symmetric2");
  app->add_option("--band", f.band, "Sakoe-Chiba half-width in samples");
  app->add_option("--dtw-normalize", f.dtw_normalize, "path or none");
  app->add_option("--grid-step", f.grid_step, "Weight grid resolution");
  app->add_option("--objective-k", f.objective_k, "k values to optimise, e.g. 1,3,5");
  app->add_option("--kind", f.kinds, "Sweeps: sensors,sizes,methods,classes");
  app->add_option("--segment-s", f.segment_s, "Heatmap segment length in seconds (0: whole)");
  app->add_option("--out", f.out, "Output directory");
  app->add_option("--seed", f.seed, "Global seed");
  app->add_option("--threads", f.threads, "Worker threads (default: all cores)");
  app->add_flag("-q,--quiet", f.quiet, "No progress output");
}

json BuildConfig(const Flags& f) {
  json doc = json::object();
  if (!f.config_file.empty()) {
    std::ifstream in(f.config_file);
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError{f.config_file + " is not valid JSON: " + e.what()};
    }
    if (!doc.is_object()) throw ConfigError{f.config_file + " is not a JSON object"};
  }
  if (f.data) {
    doc["data_dir"] = *f.data;
    doc.erase("synthetic");
  }
  if (f.synthetic) {
    json syn = json::object();
    for (const auto& item : *f.synthetic) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ConfigError{"expected key=value, got '" + item + "'"};
      const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
      if (key == "n" || key == "n_subjects") {
        syn["n_subjects"] = ToUint(value, key);
      } else if (key == "dur" || key == "duration_s") {
        syn["duration_s"] = ToDouble(value, key);
      } else if (key == "seed") {
        syn["seed"] = ToUint(value, key);
      } else if (key == "sep" || key == "separability") {
        syn["separability"] = ToDouble(value, key);
      } else {
        throw ConfigError{"unknown synthetic key '" + key + "'"};
      }
    }
    doc["synthetic"] = syn;
    doc.erase("data_dir");
  }
  if (f.rate) doc["preprocess"]["rate_hz"] = *f.rate;
  if (f.window_ms) doc["preprocess"]["window_ms"] = *f.window_ms;
  if (f.normalize) doc["preprocess"]["normalize"] = *f.normalize;
  if (f.snippet_frac) {
    json list = json::array();
    for (const auto& s : SplitList(*f.snippet_frac)) list.push_back(ToDouble(s, "--snippet-frac"));
    doc["fractions"] = list;
  }
  if (f.cls) doc["class"]["mode"] = *f.cls;
  if (f.class_weights) {
    json list = json::array();
    for (const auto& s : SplitList(*f.class_weights)) list.push_back(ToDouble(s, "--class-weights"));
    doc["class"]["weights"] = list;
  }
  if (f.filter_side) doc["class"]["filter_side"] = *f.filter_side;
  const int weight_flags = (f.sensors ? 1 : 0) + (f.weights ? 1 : 0) + (f.grid ? 1 : 0);
  if (weight_flags > 1) throw ConfigError{"--sensors, --weights and --grid are exclusive"};
  if (f.sensors) doc["weights"] = {{"mode", "sensors"}, {"sensors", SplitList(*f.sensors)}};
  if (f.grid) doc["weights"] = {{"mode", "grid"}};
  if (f.weights) {
    json values = json::object();
    for (const auto& item : SplitList(*f.weights)) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ConfigError{"expected sensor=weight, got '" + item + "'"};
      std::string key = item.substr(0, eq);
      for (auto& ch : key) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      if (key != "BVP" && key != "EDA" && key != "TEMP" && key != "ACC") {
        throw ConfigError{"unknown sensor '" + item.substr(0, eq) + "'"};
      }
      values[key] = ToDouble(item.substr(eq + 1), "--weights");
    }
    doc["weights"] = {{"mode", "explicit"}, {"values", values}};
  }
  if (f.method) doc["method"] = *f.method;
  if (f.step_pattern) doc["dtw"]["step_pattern"] = *f.step_pattern;
  if (f.dtw_normalize) doc["dtw"]["normalization"] = *f.dtw_normalize;
  if (f.band) {
    if (*f.band < 0) throw ConfigError{"--band must be non-negative"};
    doc["dtw"]["band"] = *f.band;
  }
  if (f.grid_step) doc["grid_step"] = *f.grid_step;
  if (f.objective_k) {
    json list = json::array();
    for (const auto& s : SplitList(*f.objective_k)) list.push_back(ToUint(s, "--objective-k"));
    doc["objective_ks"] = list;
  }
  if (f.kinds) doc["sweep_kinds"] = SplitList(*f.kinds);
  if (f.segment_s) doc["heatmap_segment_s"] = *f.segment_s;
  if (f.out) doc["output_dir"] = *f.out;
  if (f.seed) doc["seed"] = *f.seed;
  if (f.threads) doc["threads"] = *f.threads;
  return doc;
}

int ExitCodeFor(reid_status status) {
  switch (status) {
    case REID_OK: return 0;
    case REID_ERR_INGEST: return kExitIngest;
    case REID_ERR_CONFIG: return kExitConfig;
    default: return kExitEval;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Re-identification attacks on wearable time series"};
  app.require_subcommand(1);
  app.set_version_flag("--version", reid_version());

  Flags flags;
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"attack", "Run the attack and report Precision@k"},
      {"sweep", "Sweep sensor combinations, snippet sizes, methods or classes"},
      {"optimize", "Grid-search per-class sensor weights"},
      {"heatmap", "Pairwise similarity matrices between subjects"},
      {"synth", "Write a synthetic dataset to --out"},
      {"validate", "Check that a dataset ingests cleanly"}};
  for (const auto& [name, help] : commands) AddFlags(app.add_subcommand(name, help), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  std::string config;
  try {
    config = BuildConfig(flags).dump();
  } catch (const ConfigError& e) {
    std::cerr << "reident: config error: " << e.message << '\n';
    return kExitConfig;
  }

  char* result = nullptr;
  const reid_status status =
      reid_run(command.c_str(), config.c_str(), flags.quiet ? 0 : 1, &result);
  if (command == "validate" && result != nullptr) {
    const json doc = json::parse(result);
    for (const auto& p : doc.at("problems")) std::cout << p.get<std::string>() << '\n';
    if (doc.at("problems").empty()) std::cout << "ok\n";
  }
  reid_string_free(result);
  if (status != REID_OK) {
    const char* kind = status == REID_ERR_INGEST   ? "ingest error"
                       : status == REID_ERR_CONFIG ? "config error"
                                                   : "error";
    std::cerr << "reident: " << kind << ": " << reid_last_error() << '\n';
  }
  return ExitCodeFor(status);
}
