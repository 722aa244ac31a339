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

#include "reident/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <string>

#include "reident/error.hpp"

namespace reident {
namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

std::string_view ToString(Modality m) {
  switch (m) {
    case Modality::kBvp: return "BVP";
    case Modality::kEda: return "EDA";
    case Modality::kTemp: return "TEMP";
    case Modality::kAccX: return "ACC_X";
    case Modality::kAccY: return "ACC_Y";
    case Modality::kAccZ: return "ACC_Z";
  }
  return "?";
}

std::string_view ToString(Sensor s) {
  switch (s) {
    case Sensor::kBvp: return "BVP";
    case Sensor::kEda: return "EDA";
    case Sensor::kTemp: return "TEMP";
    case Sensor::kAcc: return "ACC";
  }
  return "?";
}

std::string_view ToString(AffectiveClass c) {
  switch (c) {
    case AffectiveClass::kNeutral: return "neutral";
    case AffectiveClass::kStress: return "stress";
    case AffectiveClass::kAmusement: return "amusement";
  }
  return "?";
}

std::optional<Modality> ParseModality(std::string_view name) {
  const std::string n = Lower(name);
  for (Modality m : kAllModalities) {
    if (Lower(ToString(m)) == n) return m;
  }
  return std::nullopt;
}

std::optional<Sensor> ParseSensor(std::string_view name) {
  const std::string n = Lower(name);
  for (Sensor s : kAllSensors) {
    if (Lower(ToString(s)) == n) return s;
  }
  return std::nullopt;
}

std::optional<AffectiveClass> ParseAffectiveClass(std::string_view name) {
  const std::string n = Lower(name);
  for (AffectiveClass c : kAllClasses) {
    if (ToString(c) == n) return c;
  }
  return std::nullopt;
}

std::optional<AffectiveClass> ClassFromCode(int code) {
  if (code >= 1 && code <= 3) return static_cast<AffectiveClass>(code);
  return std::nullopt;
}

Sensor SensorOf(Modality m) {
  switch (m) {
    case Modality::kBvp: return Sensor::kBvp;
    case Modality::kEda: return Sensor::kEda;
    case Modality::kTemp: return Sensor::kTemp;
    default: return Sensor::kAcc;
  }
}

std::vector<Modality> ModalitiesOf(Sensor s) {
  switch (s) {
    case Sensor::kBvp: return {Modality::kBvp};
    case Sensor::kEda: return {Modality::kEda};
    case Sensor::kTemp: return {Modality::kTemp};
    case Sensor::kAcc:
      return {Modality::kAccX, Modality::kAccY, Modality::kAccZ};
  }
  return {};
}

const SensorSeries& SubjectRecord::at(Modality m) const {
  auto it = series.find(m);
  if (it == series.end()) {
    throw Error("subject " + subject_id + " has no " +
                std::string(ToString(m)) + " series");
  }
  return it->second;
}

std::size_t SubjectRecord::length() const {
  return series.empty() ? 0 : series.begin()->second.size();
}

std::vector<std::string> ValidateSubject(const SubjectRecord& record,
                                         bool require_aligned) {
  std::vector<std::string> violations;
  for (Modality m : kAllModalities) {
    const std::string name(ToString(m));
    auto it = record.series.find(m);
    if (it == record.series.end()) {
      violations.push_back("missing modality " + name);
      continue;
    }
    const SensorSeries& s = it->second;
    if (s.modality != m) {
      violations.push_back("series stored under " + name + " claims modality " +
                           std::string(ToString(s.modality)));
    }
    if (!(s.rate_hz > 0.0) || !std::isfinite(s.rate_hz)) {
      violations.push_back("non-positive rate in " + name);
    }
    if (s.values.empty()) {
      violations.push_back("empty series in " + name);
    }
    if (s.values.size() != s.labels.size()) {
      violations.push_back("label count mismatch in " + name);
    }
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      if (!std::isfinite(s.values[i])) {
        violations.push_back("non-finite value in " + name + " at index " +
                             std::to_string(i));
        break;
      }
    }
    for (std::size_t i = 0; i < s.labels.size(); ++i) {
      if (!ClassFromCode(ToCode(s.labels[i]))) {
        violations.push_back("invalid label in " + name + " at index " +
                             std::to_string(i));
        break;
      }
    }
  }
  if (require_aligned && violations.empty()) {
    const SensorSeries& ref = record.series.begin()->second;
    for (const auto& [m, s] : record.series) {
      if (s.rate_hz != ref.rate_hz || s.size() != ref.size()) {
        violations.push_back("series " + std::string(ToString(m)) +
                             " not aligned to common rate/length");
      }
    }
  }
  return violations;
}

WeightVector::WeightVector() { w_.fill(1.0 / kNumSensors); }

WeightVector::WeightVector(double bvp, double eda, double temp, double acc)
    : w_{bvp, eda, temp, acc} {
  double sum = 0.0;
  for (double w : w_) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw ConfigError("weight component outside [0,1]: " + ToString(*this));
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw ConfigError("weights must sum to 1: " + ToString(*this));
  }
}

WeightVector WeightVector::Indicator(const std::vector<Sensor>& sensors) {
  std::array<bool, kNumSensors> on{};
  for (Sensor s : sensors) on[Index(s)] = true;
  const auto count = std::count(on.begin(), on.end(), true);
  if (count == 0) throw ConfigError("sensor selection is empty");
  std::array<double, kNumSensors> w{};
  for (std::size_t i = 0; i < kNumSensors; ++i) {
    w[i] = on[i] ? 1.0 / static_cast<double>(count) : 0.0;
  }
  return WeightVector(w[0], w[1], w[2], w[3]);
}

std::string ToString(const WeightVector& w) {
  std::string out = "(";
  for (Sensor s : kAllSensors) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%s%s=%.4g", s == Sensor::kBvp ? "" : ", ",
                  std::string(ToString(s)).c_str(), w[s]);
    out += buf;
  }
  return out + ")";
}

}  // namespace reident
