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

#include "reident/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "reident/error.hpp"
#include "reident/random.hpp"
#include "text_io.hpp"

namespace reident {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::string_view kScalarHeader = "t,value,label";
constexpr std::string_view kAccHeader = "t,x,y,z,label";

std::string FileStem(Sensor s) {
  switch (s) {
    case Sensor::kBvp: return "bvp";
    case Sensor::kEda: return "eda";
    case Sensor::kTemp: return "temp";
    case Sensor::kAcc: return "acc";
  }
  return "";
}

// Splits one CSV line into fields without allocation.
std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

struct ParsedFile {
  std::vector<std::vector<double>> columns;  // one per value column
  std::vector<AffectiveClass> labels;
};

// Reads a t,<values...>,label file. Rows with ignored label codes are dropped.
ParsedFile ReadChannelFile(const fs::path& path, std::string_view header,
                           std::size_t value_columns, double rate_hz) {
  std::ifstream in(path);
  if (!in) throw IngestError(path.string(), "missing file");
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw IngestError(path.string(), "empty file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) {
    throw IngestError(path.string(), 1,
                      "expected header '" + std::string(header) + "'");
  }

  ParsedFile out;
  out.columns.resize(value_columns);
  const std::size_t n_fields = value_columns + 2;
  double prev_t = 0.0;
  bool have_prev = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = SplitFields(line);
    if (fields.size() != n_fields) {
      throw IngestError(path.string(), line_no,
                        "expected " + std::to_string(n_fields) + " fields");
    }
    double t = 0.0;
    if (!textio::ParseDouble(fields[0], t) || !std::isfinite(t)) {
      throw IngestError(path.string(), line_no, "malformed time");
    }
    if (have_prev) {
      const double steps = (t - prev_t) * rate_hz;
      if (!(t > prev_t) || std::abs(steps - std::round(steps)) > 1e-3 ||
          steps < 0.5) {
        throw IngestError(path.string(), line_no,
                          "time not increasing at the nominal rate");
      }
    }
    prev_t = t;
    have_prev = true;

    int code = 0;
    const std::string_view label = fields.back();
    auto [ptr, ec] = std::from_chars(label.data(), label.data() + label.size(),
                                     code);
    if (ec != std::errc() || ptr != label.data() + label.size()) {
      throw IngestError(path.string(), line_no, "malformed label");
    }
    if (code < 0 || code > 7) {
      throw IngestError(path.string(), line_no,
                        "label code " + std::to_string(code) + " outside 0..7");
    }
    std::array<double, 3> values{};
    for (std::size_t c = 0; c < value_columns; ++c) {
      if (!textio::ParseDouble(fields[c + 1], values[c]) ||
          !std::isfinite(values[c])) {
        throw IngestError(path.string(), line_no, "malformed value");
      }
    }
    const auto cls = ClassFromCode(code);
    if (!cls) continue;
    for (std::size_t c = 0; c < value_columns; ++c) {
      out.columns[c].push_back(values[c]);
    }
    out.labels.push_back(*cls);
  }
  if (out.labels.empty()) throw IngestError(path.string(), "empty series");
  return out;
}

SensorSeries MakeSeries(Modality m, double rate, std::vector<double> values,
                        std::vector<AffectiveClass> labels) {
  SensorSeries s;
  s.modality = m;
  s.rate_hz = rate;
  s.values = std::move(values);
  s.labels = std::move(labels);
  return s;
}

void WriteChannelFile(const fs::path& path,
                      const std::vector<const SensorSeries*>& channels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError(path.string(), "cannot open for writing");
  const SensorSeries& ref = *channels.front();
  out << (channels.size() == 1 ? kScalarHeader : kAccHeader) << '\n';
  std::string row;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    row.clear();
    textio::AppendDouble(row, static_cast<double>(i) / ref.rate_hz);
    for (const SensorSeries* s : channels) {
      row += ',';
      textio::AppendDouble(row, s->values[i]);
    }
    row += ',';
    row += std::to_string(ToCode(ref.labels[i]));
    row += '\n';
    out << row;
  }
  if (!out) throw IngestError(path.string(), "write failed");
}

}  // namespace

std::map<Sensor, double> DefaultRates() {
  return {{Sensor::kBvp, 64.0},
          {Sensor::kEda, 4.0},
          {Sensor::kTemp, 4.0},
          {Sensor::kAcc, 32.0}};
}

DatasetManifest ReadManifest(const fs::path& root) {
  const fs::path path = root / "manifest.json";
  if (!fs::is_directory(root)) {
    throw IngestError(root.string(), "dataset directory does not exist");
  }
  std::ifstream in(path);
  if (!in) throw IngestError(path.string(), "missing file");
  DatasetManifest manifest;
  manifest.root_dir = root;
  try {
    const json doc = json::parse(in);
    manifest.subject_ids = doc.at("subjects").get<std::vector<std::string>>();
    if (doc.contains("rates_hz")) {
      for (const auto& [key, value] : doc.at("rates_hz").items()) {
        const auto sensor = ParseSensor(key);
        if (!sensor) throw IngestError(path.string(), "unknown modality " + key);
        manifest.rate_hz[*sensor] = value.get<double>();
      }
    }
  } catch (const json::exception& e) {
    throw IngestError(path.string(), e.what());
  }
  return manifest;
}

void WriteManifest(const DatasetManifest& manifest) {
  json doc;
  doc["subjects"] = manifest.subject_ids;
  json rates = json::object();
  for (const auto& [sensor, rate] : manifest.rate_hz) {
    rates[FileStem(sensor)] = rate;
  }
  doc["rates_hz"] = rates;
  const fs::path path = manifest.root_dir / "manifest.json";
  std::ofstream out(path);
  if (!out) throw IngestError(path.string(), "cannot open for writing");
  out << doc.dump(2) << '\n';
}

std::vector<SubjectRecord> LoadDataset(const DatasetManifest& manifest) {
  if (manifest.subject_ids.empty()) {
    throw IngestError(manifest.root_dir.string(), "no subjects");
  }
  std::set<std::string> seen;
  for (const auto& id : manifest.subject_ids) {
    if (!seen.insert(id).second) {
      throw IngestError(manifest.root_dir.string(), "duplicate subject " + id);
    }
  }
  for (Sensor s : kAllSensors) {
    auto it = manifest.rate_hz.find(s);
    if (it == manifest.rate_hz.end() || !(it->second > 0.0)) {
      throw IngestError(manifest.root_dir.string(),
                        "missing or non-positive rate for " +
                            std::string(ToString(s)));
    }
  }

  std::vector<SubjectRecord> records;
  records.reserve(manifest.subject_ids.size());
  for (const auto& id : manifest.subject_ids) {
    const fs::path dir = manifest.root_dir / id;
    SubjectRecord record;
    record.subject_id = id;
    for (Sensor s : {Sensor::kBvp, Sensor::kEda, Sensor::kTemp}) {
      const double rate = manifest.rate_hz.at(s);
      ParsedFile f =
          ReadChannelFile(dir / (FileStem(s) + ".csv"), kScalarHeader, 1, rate);
      const Modality m = ModalitiesOf(s).front();
      record.series.emplace(
          m, MakeSeries(m, rate, std::move(f.columns[0]), std::move(f.labels)));
    }
    const double acc_rate = manifest.rate_hz.at(Sensor::kAcc);
    ParsedFile acc = ReadChannelFile(dir / "acc.csv", kAccHeader, 3, acc_rate);
    const auto axes = ModalitiesOf(Sensor::kAcc);
    for (std::size_t a = 0; a < axes.size(); ++a) {
      record.series.emplace(axes[a], MakeSeries(axes[a], acc_rate,
                                                std::move(acc.columns[a]),
                                                acc.labels));
    }
    const auto violations = ValidateSubject(record);
    if (!violations.empty()) {
      throw IngestError(dir.string(), violations.front());
    }
    records.push_back(std::move(record));
  }
  return records;
}

void WriteDataset(const std::vector<SubjectRecord>& records,
                  const fs::path& root) {
  if (records.empty()) throw IngestError(root.string(), "no subjects");
  DatasetManifest manifest;
  manifest.root_dir = root;
  for (Sensor s : kAllSensors) {
    manifest.rate_hz[s] = records.front().at(ModalitiesOf(s).front()).rate_hz;
  }
  fs::create_directories(root);
  for (const SubjectRecord& record : records) {
    const auto violations = ValidateSubject(record);
    if (!violations.empty()) {
      throw IngestError(record.subject_id, violations.front());
    }
    for (Sensor s : kAllSensors) {
      for (Modality m : ModalitiesOf(s)) {
        if (record.at(m).rate_hz != manifest.rate_hz.at(s)) {
          throw IngestError(record.subject_id,
                            "rate of " + std::string(ToString(m)) +
                                " differs from other subjects");
        }
      }
    }
    const auto& x = record.at(Modality::kAccX);
    const auto& y = record.at(Modality::kAccY);
    const auto& z = record.at(Modality::kAccZ);
    if (x.size() != y.size() || x.size() != z.size() || x.labels != y.labels ||
        x.labels != z.labels) {
      throw IngestError(record.subject_id, "ACC axes are not row-aligned");
    }
    const fs::path dir = root / record.subject_id;
    fs::create_directories(dir);
    for (Sensor s : {Sensor::kBvp, Sensor::kEda, Sensor::kTemp}) {
      WriteChannelFile(dir / (FileStem(s) + ".csv"),
                       {&record.at(ModalitiesOf(s).front())});
    }
    WriteChannelFile(dir / "acc.csv", {&x, &y, &z});
    manifest.subject_ids.push_back(record.subject_id);
  }
  WriteManifest(manifest);
}

void CheckSyntheticConfig(const SyntheticConfig& config) {
  if (config.n_subjects < 2) throw ConfigError("synthetic: need n >= 2 subjects");
  if (!(config.duration_s >= 10.0) || !std::isfinite(config.duration_s)) {
    throw ConfigError("synthetic: duration must be >= 10 s");
  }
  if (!(config.separability >= 0.0 && config.separability <= 1.0)) {
    throw ConfigError("synthetic: separability must lie in [0,1]");
  }
  for (Sensor s : kAllSensors) {
    auto it = config.rate_hz.find(s);
    if (it == config.rate_hz.end() || !(it->second > 0.0)) {
      throw ConfigError("synthetic: missing or non-positive rate for " +
                        std::string(ToString(s)));
    }
  }
}

namespace {

// Population-level generative parameters for one channel. Amplitude, noise,
// drift and the affective shifts are in the channel's physical units.
struct ChannelModel {
  double offset;
  double offset_spread;
  double amplitude;
  double frequency_hz;
  double drift;
  double noise;
  double stress_shift;
  double amusement_shift;
};

ChannelModel ModelFor(Modality m) {
  switch (m) {
    case Modality::kBvp: return {0.0, 5.0, 40.0, 1.2, 4.0, 8.0, 12.0, 4.0};
    case Modality::kEda: return {2.0, 1.0, 0.15, 0.03, 0.3, 0.02, 0.8, 0.3};
    case Modality::kTemp: return {33.0, 1.0, 0.1, 0.004, 0.4, 0.01, -0.3, 0.1};
    case Modality::kAccX: return {-20.0, 30.0, 6.0, 0.9, 2.0, 3.0, 8.0, -4.0};
    case Modality::kAccY: return {10.0, 30.0, 5.0, 0.7, 2.0, 3.0, -6.0, 5.0};
    case Modality::kAccZ: return {55.0, 15.0, 4.0, 1.1, 2.0, 3.0, 4.0, 6.0};
  }
  return {};
}

// Relative between-subject spread applied to each parameter at sep = 1.
constexpr double kScaleSpread = 0.35;
constexpr double kFrequencySpread = 0.25;
// Class-level spread in units of the channel's within-class standard
// deviation; this is what makes subjects tell apart once z-scored.
constexpr double kShiftSpread = 25.0;
constexpr double kDriftSpread = 1.0;

struct ChannelParams {
  double offset, amplitude, frequency_hz, phase, drift, noise;
  std::array<double, 4> class_shift;  // indexed by label code
};

ChannelParams DrawParams(const ChannelModel& model, double sep, Rng& rng) {
  auto scale = [&](double base, double spread) {
    return base * std::max(0.05, 1.0 + sep * spread * rng.Normal());
  };
  ChannelParams p{};
  p.offset = model.offset + sep * model.offset_spread * rng.Normal();
  p.amplitude = scale(model.amplitude, kScaleSpread);
  p.frequency_hz = scale(model.frequency_hz, kFrequencySpread);
  p.phase = sep * rng.Uniform(0.0, 2.0 * std::numbers::pi);
  p.drift = model.drift * (1.0 + sep * kDriftSpread * rng.Normal());
  p.noise = scale(model.noise, kScaleSpread);
  const double unit = std::sqrt(0.5 * model.amplitude * model.amplitude +
                                model.noise * model.noise +
                                model.drift * model.drift / 12.0);
  p.class_shift[1] = 0.0;
  p.class_shift[2] = model.stress_shift + sep * kShiftSpread * unit * rng.Normal();
  p.class_shift[3] =
      model.amusement_shift + sep * kShiftSpread * unit * rng.Normal();
  return p;
}

}  // namespace

std::vector<SubjectRecord> GenerateSynthetic(const SyntheticConfig& config) {
  CheckSyntheticConfig(config);
  const std::uint64_t base_seed = config.seed;
  std::vector<SubjectRecord> records(config.n_subjects);
  for (std::uint32_t s = 0; s < config.n_subjects; ++s) {
    Rng rng(DeriveSeed(base_seed, s + 1));
    SubjectRecord& record = records[s];
    record.subject_id = "S" + std::to_string(s + 1);

    // Block boundaries as fractions of the session, jittered by up to 1% at
    // full separability.
    const double sep = config.separability;
    const double neutral_end = 0.53 + sep * rng.Uniform(-0.01, 0.01);
    const double stress_end = neutral_end + 0.30 + sep * rng.Uniform(-0.01, 0.01);

    for (Modality m : kAllModalities) {
      const double rate = config.rate_hz.at(SensorOf(m));
      const ChannelParams p = DrawParams(ModelFor(m), sep, rng);
      const auto n = static_cast<std::size_t>(std::floor(config.duration_s * rate));
      SensorSeries series;
      series.modality = m;
      series.rate_hz = rate;
      series.values.resize(n);
      series.labels.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(n);
        const AffectiveClass cls = frac < neutral_end ? AffectiveClass::kNeutral
                                   : frac < stress_end ? AffectiveClass::kStress
                                                       : AffectiveClass::kAmusement;
        const double t = static_cast<double>(i) / rate;
        series.labels[i] = cls;
        series.values[i] =
            p.offset + p.class_shift[static_cast<std::size_t>(ToCode(cls))] +
            p.amplitude *
                std::sin(2.0 * std::numbers::pi * p.frequency_hz * t + p.phase) +
            p.drift * (frac - 0.5) + p.noise * rng.Normal();
      }
      record.series.emplace(m, std::move(series));
    }
  }
  return records;
}

}  // namespace reident
