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

#ifndef REIDENT_INGEST_HPP_
#define REIDENT_INGEST_HPP_

// Dataset interchange and synthetic data.
//
// On-disk layout:
//   <root>/manifest.json
//   <root>/<subject_id>/bvp.csv    t,value,label
//   <root>/<subject_id>/eda.csv    t,value,label
//   <root>/<subject_id>/temp.csv   t,value,label
//   <root>/<subject_id>/acc.csv    t,x,y,z,label
//
// manifest.json: {"subjects": ["S2", ...],
//                 "rates_hz": {"bvp": 64, "eda": 4, "temp": 4, "acc": 32}}
//
// Rows whose label is 0 or 4..7 (transient and non-studied protocol phases)
// are dropped on load; codes outside 0..7 are rejected.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "reident/core.hpp"

namespace reident {

// Default wrist-device rates, indexed by logical sensor. The ACC rate applies
// to all three axes.
std::map<Sensor, double> DefaultRates();

struct DatasetManifest {
  std::filesystem::path root_dir;
  std::vector<std::string> subject_ids;
  std::map<Sensor, double> rate_hz = DefaultRates();
};

// Parses <root>/manifest.json. Throws IngestError.
DatasetManifest ReadManifest(const std::filesystem::path& root);
void WriteManifest(const DatasetManifest& manifest);

// One validated record per subject id, at the manifest's native rates.
std::vector<SubjectRecord> LoadDataset(const DatasetManifest& manifest);

// Writes manifest and per-subject CSVs. Every record must use the same
// per-sensor rates. Values are emitted in shortest round-trip form, so
// LoadDataset(WriteDataset(x)) == x for validated records.
void WriteDataset(const std::vector<SubjectRecord>& records,
                  const std::filesystem::path& root);

struct SyntheticConfig {
  std::uint32_t n_subjects = 15;
  double duration_s = 2160.0;
  std::uint64_t seed = 0;
  // 0 gives every subject identical generative parameters; 1 is the widest
  // between-subject spread.
  double separability = 0.8;
  std::map<Sensor, double> rate_hz = DefaultRates();
};

// Throws ConfigError when n_subjects < 2, duration_s < 10, separability is
// outside [0,1] or a rate is non-positive.
void CheckSyntheticConfig(const SyntheticConfig& config);

// Deterministic in config. Each subject gets per-channel sinusoid + drift +
// noise with per-subject frequency, amplitude, offset and affective-state
// level shifts; labels are three contiguous blocks neutral/stress/amusement
// in roughly 0.53/0.30/0.17 proportions. Subject ids are "S1".."Sn".
std::vector<SubjectRecord> GenerateSynthetic(const SyntheticConfig& config);

}  // namespace reident

#endif  // REIDENT_INGEST_HPP_
