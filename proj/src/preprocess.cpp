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

#include "reident/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "reident/error.hpp"
#include "reident/parallel.hpp"
#include "reident/random.hpp"

namespace reident {

std::string_view ToString(Normalization n) {
  return n == Normalization::kNone ? "none" : "zscore_per_subject_per_sensor";
}

std::string_view ToString(ClassFilterSide s) {
  return s == ClassFilterSide::kBoth ? "both" : "attacker";
}

std::optional<Normalization> ParseNormalization(std::string_view s) {
  if (s == "none") return Normalization::kNone;
  if (s == "zscore" || s == "zscore_per_subject_per_sensor") {
    return Normalization::kZScore;
  }
  return std::nullopt;
}

std::optional<ClassFilterSide> ParseClassFilterSide(std::string_view s) {
  if (s == "both") return ClassFilterSide::kBoth;
  if (s == "attacker") return ClassFilterSide::kAttacker;
  return std::nullopt;
}

std::size_t PreprocessConfig::WindowSamples() const {
  // Small epsilon so 250 ms at 4 Hz gives exactly one sample.
  const double samples = window_ms * common_rate_hz / 1000.0;
  return static_cast<std::size_t>(std::floor(samples + 1e-9));
}

void CheckPreprocessConfig(const PreprocessConfig& config) {
  if (!(config.common_rate_hz > 0.0) || !std::isfinite(config.common_rate_hz)) {
    throw ConfigError("common rate must be positive");
  }
  if (!(config.window_ms > 0.0) || !std::isfinite(config.window_ms)) {
    throw ConfigError("window length must be positive");
  }
  if (config.WindowSamples() < 1) {
    throw ConfigError("window shorter than one sample at the common rate");
  }
}

SensorSeries Resample(const SensorSeries& series, double target_rate_hz) {
  if (series.size() < 2) {
    throw PreprocessError("cannot resample " +
                          std::string(ToString(series.modality)) +
                          ": fewer than 2 samples");
  }
  if (!(target_rate_hz > 0.0) || !(series.rate_hz > 0.0)) {
    throw PreprocessError("resample: rates must be positive");
  }
  const std::size_t n = series.size();
  const double span_s = static_cast<double>(n - 1) / series.rate_hz;
  const auto m =
      static_cast<std::size_t>(std::floor(span_s * target_rate_hz + 1e-9)) + 1;

  SensorSeries out;
  out.modality = series.modality;
  out.rate_hz = target_rate_hz;
  out.values.resize(m);
  out.labels.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double pos =
        static_cast<double>(k) * series.rate_hz / target_rate_hz;
    auto lo = static_cast<std::size_t>(std::floor(pos));
    if (lo >= n - 1) {
      out.values[k] = series.values[n - 1];
      out.labels[k] = series.labels[n - 1];
      continue;
    }
    const double frac = pos - static_cast<double>(lo);
    const double a = series.values[lo];
    const double b = series.values[lo + 1];
    out.values[k] = a + (b - a) * frac;
    out.labels[k] = series.labels[frac < 0.5 ? lo : lo + 1];
  }
  return out;
}

namespace {

void ZScore(std::vector<double>& values) {
  const auto n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= n;
  const double sd = std::sqrt(var);
  if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
    std::fill(values.begin(), values.end(), 0.0);
    return;
  }
  for (double& v : values) v = (v - mean) / sd;
}

}  // namespace

SubjectRecord PreprocessSubject(const SubjectRecord& record,
                                const PreprocessConfig& config) {
  CheckPreprocessConfig(config);
  const auto violations = ValidateSubject(record);
  if (!violations.empty()) {
    throw PreprocessError(record.subject_id + ": " + violations.front());
  }
  SubjectRecord out;
  out.subject_id = record.subject_id;
  std::size_t length = SIZE_MAX;
  for (const auto& [m, s] : record.series) {
    SensorSeries r = s.rate_hz == config.common_rate_hz
                         ? s
                         : Resample(s, config.common_rate_hz);
    length = std::min(length, r.size());
    out.series.emplace(m, std::move(r));
  }
  const std::size_t window = config.WindowSamples();
  length = (length / window) * window;
  if (length == 0) {
    throw PreprocessError(record.subject_id +
                          ": shorter than one window after resampling");
  }
  const std::vector<AffectiveClass> labels(
      out.series.at(Modality::kBvp).labels.begin(),
      out.series.at(Modality::kBvp).labels.begin() +
          static_cast<std::ptrdiff_t>(length));
  for (auto& [m, s] : out.series) {
    s.values.resize(length);
    s.labels = labels;
    if (config.normalization == Normalization::kZScore) ZScore(s.values);
  }
  return out;
}

std::vector<SubjectRecord> PreprocessDataset(
    const std::vector<SubjectRecord>& records, const PreprocessConfig& config,
    std::size_t threads) {
  std::vector<SubjectRecord> out(records.size());
  ParallelFor(records.size(), threads, [&](std::size_t i) {
    out[i] = PreprocessSubject(records[i], config);
  });
  return out;
}

std::size_t SnippetLength(std::size_t total_samples, double fraction,
                          std::size_t window_samples) {
  const auto raw = static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(total_samples)));
  return std::max(raw, window_samples);
}

std::pair<std::size_t, std::size_t> LongestRun(
    const std::vector<AffectiveClass>& labels, AffectiveClass cls) {
  std::size_t best_begin = 0, best_len = 0;
  std::size_t i = 0;
  while (i < labels.size()) {
    if (labels[i] != cls) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < labels.size() && labels[j] == cls) ++j;
    if (j - i > best_len) {
      best_begin = i;
      best_len = j - i;
    }
    i = j;
  }
  return {best_begin, best_begin + best_len};
}

SnippetSplit SplitAttackerSet(const SubjectRecord& record, double fraction,
                              std::optional<AffectiveClass> class_filter,
                              std::size_t window_samples) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw PreprocessError("snippet fraction must lie in (0, 1]");
  }
  if (window_samples == 0) throw PreprocessError("window must be >= 1 sample");
  const auto violations = ValidateSubject(record, /*require_aligned=*/true);
  if (!violations.empty()) {
    throw PreprocessError(record.subject_id + ": " + violations.front());
  }
  const std::size_t total = record.length();
  const std::size_t len = SnippetLength(total, fraction, window_samples);
  if (len >= total) {
    throw PreprocessError(record.subject_id +
                          ": snippet would leave an empty record");
  }

  std::size_t region_begin = 0, region_end = total;
  if (class_filter) {
    std::tie(region_begin, region_end) =
        LongestRun(record.at(Modality::kBvp).labels, *class_filter);
  }
  if (region_end - region_begin < len) {
    throw PreprocessError(record.subject_id + ": insufficient class data");
  }
  const std::size_t center = region_begin + (region_end - region_begin) / 2;
  std::size_t start = center >= len / 2 ? center - len / 2 : 0;
  start = std::clamp(start, region_begin, region_end - len);

  SnippetSplit split;
  split.cut_start = start;
  split.shortened.subject_id = record.subject_id;
  const auto b = static_cast<std::ptrdiff_t>(start);
  const auto e = static_cast<std::ptrdiff_t>(start + len);
  for (const auto& [m, s] : record.series) {
    SensorSeries snip{m, s.rate_hz, {}, {}};
    snip.values.assign(s.values.begin() + b, s.values.begin() + e);
    snip.labels.assign(s.labels.begin() + b, s.labels.begin() + e);
    split.snippet.emplace(m, std::move(snip));

    SensorSeries rest{m, s.rate_hz, {}, {}};
    rest.values.reserve(total - len);
    rest.labels.reserve(total - len);
    rest.values.insert(rest.values.end(), s.values.begin(), s.values.begin() + b);
    rest.values.insert(rest.values.end(), s.values.begin() + e, s.values.end());
    rest.labels.insert(rest.labels.end(), s.labels.begin(), s.labels.begin() + b);
    rest.labels.insert(rest.labels.end(), s.labels.begin() + e, s.labels.end());
    split.shortened.series.emplace(m, std::move(rest));
  }
  return split;
}

SubjectRecord ReinsertSnippet(const SubjectRecord& shortened,
                              const Snippet& snippet, std::size_t cut_start) {
  SubjectRecord out;
  out.subject_id = shortened.subject_id;
  for (const auto& [m, s] : shortened.series) {
    const SensorSeries& snip = snippet.at(m);
    if (cut_start > s.size()) throw PreprocessError("cut position out of range");
    const auto c = static_cast<std::ptrdiff_t>(cut_start);
    SensorSeries full{m, s.rate_hz, {}, {}};
    full.values.assign(s.values.begin(), s.values.begin() + c);
    full.values.insert(full.values.end(), snip.values.begin(), snip.values.end());
    full.values.insert(full.values.end(), s.values.begin() + c, s.values.end());
    full.labels.assign(s.labels.begin(), s.labels.begin() + c);
    full.labels.insert(full.labels.end(), snip.labels.begin(), snip.labels.end());
    full.labels.insert(full.labels.end(), s.labels.begin() + c, s.labels.end());
    out.series.emplace(m, std::move(full));
  }
  return out;
}

InstanceSet BuildAttackInstances(
    const std::vector<std::shared_ptr<const SubjectRecord>>& dataset,
    const PreprocessConfig& config, const AttackSetup& setup) {
  if (dataset.size() < 2) {
    throw PreprocessError("an attack needs at least 2 subjects");
  }
  CheckPreprocessConfig(config);
  const std::size_t window = config.WindowSamples();
  // Owner-side copies carry no subject id.
  std::vector<std::shared_ptr<const SubjectRecord>> anonymous = dataset;
  for (auto& rec : anonymous) {
    if (rec->subject_id.empty()) continue;
    auto copy = std::make_shared<SubjectRecord>();
    copy->series = rec->series;
    rec = std::move(copy);
  }
  InstanceSet out;
  for (std::size_t t = 0; t < dataset.size(); ++t) {
    const SubjectRecord& target = *dataset[t];
    SnippetSplit split;
    try {
      split = SplitAttackerSet(target, setup.fraction, setup.class_filter, window);
    } catch (const PreprocessError&) {
      if (setup.skip_insufficient && setup.class_filter) {
        out.skipped_targets.push_back(target.subject_id);
        continue;
      }
      throw;
    }

    Rng rng(DeriveSeed(setup.seed, t));
    std::set<std::string> used;
    auto nonce = [&] {
      for (;;) {
        std::string h = rng.HexNonce();
        if (used.insert(h).second) return h;
      }
    };

    AttackInstance inst;
    inst.target_id = target.subject_id;
    inst.attacker_snippet = std::move(split.snippet);
    inst.cut_start = split.cut_start;
    if (setup.class_filter && setup.filter_side == ClassFilterSide::kBoth) {
      inst.candidate_class = setup.class_filter;
    }
    auto shortened = std::make_shared<SubjectRecord>(std::move(split.shortened));
    shortened->subject_id.clear();
    inst.collection.reserve(dataset.size());
    for (std::size_t c = 0; c < dataset.size(); ++c) {
      CollectionEntry entry;
      entry.handle = nonce();
      if (c == t) {
        entry.record = shortened;
        inst.truth = entry.handle;
      } else {
        entry.record = anonymous[c];
      }
      inst.collection.push_back(std::move(entry));
    }
    std::sort(inst.collection.begin(), inst.collection.end(),
              [](const CollectionEntry& a, const CollectionEntry& b) {
                return a.handle < b.handle;
              });
    out.instances.push_back(std::move(inst));
  }
  return out;
}

InstanceSet BuildAttackInstances(const std::vector<SubjectRecord>& dataset,
                                 const PreprocessConfig& config,
                                 const AttackSetup& setup) {
  return BuildAttackInstances(Share(dataset), config, setup);
}

std::vector<std::shared_ptr<const SubjectRecord>> Share(
    std::vector<SubjectRecord> records) {
  std::vector<std::shared_ptr<const SubjectRecord>> out;
  out.reserve(records.size());
  for (auto& r : records) {
    out.push_back(std::make_shared<const SubjectRecord>(std::move(r)));
  }
  return out;
}

}  // namespace reident
