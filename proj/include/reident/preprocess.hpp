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

#ifndef REIDENT_PREPROCESS_HPP_
#define REIDENT_PREPROCESS_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "reident/core.hpp"

namespace reident {

enum class Normalization { kNone, kZScore };

// Which side of an attack a class filter applies to. kBoth restricts the
// attacker snippet and every candidate series to the class; kAttacker only
// restricts where the snippet is cut from.
enum class ClassFilterSide { kBoth, kAttacker };

std::string_view ToString(Normalization n);
std::string_view ToString(ClassFilterSide s);
std::optional<Normalization> ParseNormalization(std::string_view s);
std::optional<ClassFilterSide> ParseClassFilterSide(std::string_view s);

struct PreprocessConfig {
  double common_rate_hz = 64.0;
  double window_ms = 210.0;
  Normalization normalization = Normalization::kZScore;

  // Samples per non-overlapping window: floor(window_ms * rate / 1000).
  std::size_t WindowSamples() const;
};

// Throws ConfigError unless rate > 0, window_ms > 0 and a window holds at
// least one sample.
void CheckPreprocessConfig(const PreprocessConfig& config);

// Linear interpolation onto a uniform grid at target_rate_hz covering
// [0, (n-1)/rate]. Labels come from the nearest original sample.
// Throws PreprocessError for series shorter than two samples.
SensorSeries Resample(const SensorSeries& series, double target_rate_hz);

// Resamples every channel to the common rate, truncates all channels to the
// shortest one and then to whole windows, replaces every label track with
// the BVP one, and optionally z-scores each channel. Constant channels
// normalize to all zeros.
SubjectRecord PreprocessSubject(const SubjectRecord& record,
                                const PreprocessConfig& config);

std::vector<SubjectRecord> PreprocessDataset(
    const std::vector<SubjectRecord>& records, const PreprocessConfig& config,
    std::size_t threads = 0);

using Snippet = std::map<Modality, SensorSeries>;

struct SnippetSplit {
  Snippet snippet;
  SubjectRecord shortened;
  // Sample index in the original record where the snippet started.
  std::size_t cut_start = 0;
};

// Snippet length for a record of total_samples: max(floor(f * n), window).
std::size_t SnippetLength(std::size_t total_samples, double fraction,
                          std::size_t window_samples);

// [begin, end) of the longest contiguous run of cls; first run wins ties.
// Returns {0, 0} when the class does not occur.
std::pair<std::size_t, std::size_t> LongestRun(
    const std::vector<AffectiveClass>& labels, AffectiveClass cls);

// Cuts the attacker snippet from the middle of the eligible region (whole
// record, or the longest run of class_filter) and deletes it from every
// channel. The record must be aligned (see PreprocessSubject).
// Throws PreprocessError when the eligible region is too short or nothing
// would remain.
SnippetSplit SplitAttackerSet(const SubjectRecord& record, double fraction,
                              std::optional<AffectiveClass> class_filter,
                              std::size_t window_samples);

// Inverse of SplitAttackerSet.
SubjectRecord ReinsertSnippet(const SubjectRecord& shortened,
                              const Snippet& snippet, std::size_t cut_start);

struct CollectionEntry {
  std::string handle;
  std::shared_ptr<const SubjectRecord> record;
};

struct AttackInstance {
  std::string target_id;
  Snippet attacker_snippet;
  // Sorted by handle; handles are random nonces.
  std::vector<CollectionEntry> collection;
  // Handle of the target's shortened record. Only the evaluator reads it.
  std::string truth;
  // Class every candidate is restricted to before scoring, if any.
  std::optional<AffectiveClass> candidate_class;
  std::size_t cut_start = 0;
};

struct AttackSetup {
  double fraction = 0.0001;
  std::optional<AffectiveClass> class_filter;
  ClassFilterSide filter_side = ClassFilterSide::kBoth;
  std::uint64_t seed = 0;
  // Skip targets without enough class data instead of failing.
  bool skip_insufficient = false;
};

struct InstanceSet {
  std::vector<AttackInstance> instances;
  std::vector<std::string> skipped_targets;
};

// One instance per subject as target. Every collection holds all N subjects:
// the target's shortened record plus the N-1 untouched others, shared by
// pointer. Throws PreprocessError for fewer than two subjects.
InstanceSet BuildAttackInstances(
    const std::vector<std::shared_ptr<const SubjectRecord>>& dataset,
    const PreprocessConfig& config, const AttackSetup& setup);

InstanceSet BuildAttackInstances(const std::vector<SubjectRecord>& dataset,
                                 const PreprocessConfig& config,
                                 const AttackSetup& setup);

std::vector<std::shared_ptr<const SubjectRecord>> Share(
    std::vector<SubjectRecord> records);

}  // namespace reident

#endif  // REIDENT_PREPROCESS_HPP_
