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

#ifndef REIDENT_CORE_HPP_
#define REIDENT_CORE_HPP_

// Domain types shared by every stage of the attack pipeline.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace reident {

// Raw wrist-device channels as stored on disk and in memory.
enum class Modality : std::uint8_t { kBvp, kEda, kTemp, kAccX, kAccY, kAccZ };

inline constexpr std::array<Modality, 6> kAllModalities = {
    Modality::kBvp,  Modality::kEda,  Modality::kTemp,
    Modality::kAccX, Modality::kAccY, Modality::kAccZ};

// Sensors as seen by scoring. kAcc fuses the three accelerometer axes and
// never carries raw samples.
enum class Sensor : std::uint8_t { kBvp, kEda, kTemp, kAcc };

inline constexpr std::array<Sensor, 4> kAllSensors = {
    Sensor::kBvp, Sensor::kEda, Sensor::kTemp, Sensor::kAcc};

inline constexpr std::size_t kNumSensors = kAllSensors.size();

// Label codes follow the WESAD protocol numbering.
enum class AffectiveClass : std::uint8_t {
  kNeutral = 1,
  kStress = 2,
  kAmusement = 3,
};

inline constexpr std::array<AffectiveClass, 3> kAllClasses = {
    AffectiveClass::kNeutral, AffectiveClass::kStress,
    AffectiveClass::kAmusement};

std::string_view ToString(Modality m);
std::string_view ToString(Sensor s);
std::string_view ToString(AffectiveClass c);

// Case-insensitive; accept "bvp", "BVP", "acc_x", ...
std::optional<Modality> ParseModality(std::string_view name);
std::optional<Sensor> ParseSensor(std::string_view name);
std::optional<AffectiveClass> ParseAffectiveClass(std::string_view name);

// Maps a raw label code to a class; nullopt for codes the attack ignores.
std::optional<AffectiveClass> ClassFromCode(int code);
inline int ToCode(AffectiveClass c) { return static_cast<int>(c); }

inline std::size_t Index(Sensor s) { return static_cast<std::size_t>(s); }
inline std::size_t Index(Modality m) { return static_cast<std::size_t>(m); }

// The logical sensor a raw channel contributes to.
Sensor SensorOf(Modality m);

// Raw channels backing a logical sensor (three for kAcc, one otherwise).
std::vector<Modality> ModalitiesOf(Sensor s);

// One uniformly sampled channel with a class label per sample.
struct SensorSeries {
  Modality modality = Modality::kBvp;
  double rate_hz = 0.0;
  std::vector<double> values;
  std::vector<AffectiveClass> labels;

  std::size_t size() const { return values.size(); }
  bool operator==(const SensorSeries&) const = default;
};

struct SubjectRecord {
  std::string subject_id;
  std::map<Modality, SensorSeries> series;

  const SensorSeries& at(Modality m) const;
  // Length of the first series; only meaningful once aligned.
  std::size_t length() const;
  bool operator==(const SubjectRecord&) const = default;
};

// Empty iff every SubjectRecord invariant holds. Also reports misalignment
// (differing rates or lengths) when require_aligned is set.
std::vector<std::string> ValidateSubject(const SubjectRecord& record,
                                         bool require_aligned = false);

// Convex per-sensor weights. Construction enforces sum-to-one.
class WeightVector {
 public:
  static constexpr double kSumTolerance = 1e-9;

  // Equal weights over all four sensors.
  WeightVector();
  // Throws ConfigError when any component is outside [0,1] or the sum is off.
  WeightVector(double bvp, double eda, double temp, double acc);

  // Normalized indicator weights over the given sensors.
  static WeightVector Indicator(const std::vector<Sensor>& sensors);
  static WeightVector Equal() { return WeightVector(); }

  double operator[](Sensor s) const { return w_[Index(s)]; }
  const std::array<double, kNumSensors>& components() const { return w_; }

  bool operator==(const WeightVector&) const = default;

 private:
  std::array<double, kNumSensors> w_;
};

std::string ToString(const WeightVector& w);

}  // namespace reident

#endif  // REIDENT_CORE_HPP_
