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

#include "reident/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "reident/error.hpp"
#include "reident/parallel.hpp"
#include "text_io.hpp"

namespace reident {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Cell {
  double cost;
  std::size_t length;
};

// Lexicographic (cost, length).
inline bool Better(const Cell& a, const Cell& b) {
  return a.cost < b.cost || (a.cost == b.cost && a.length < b.length);
}

// `outer` indexes rows, `inner` the two rolling buffers. Both step patterns
// are invariant under transposition, so callers put the shorter series
// inner.
template <bool kSym2>
double CostOnly(std::span<const double> outer, std::span<const double> inner,
                std::optional<std::size_t> band) {
  const std::size_t n = outer.size();
  const std::size_t m = inner.size();
  std::vector<double> prev(m, kInf), cur(m, kInf);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo = 0, hi = m - 1;
    if (band) {
      lo = i > *band ? i - *band : 0;
      if (lo >= m) break;
      hi = std::min(m - 1, i + *band);
      if (lo > 0) cur[lo - 1] = kInf;
    }
    const double a = outer[i];
    std::size_t j = lo;
    double left;
    if (i == 0) {
      left = std::abs(a - inner[0]);
      cur[0] = left;
      j = 1;
    } else if (j == 0) {
      left = prev[0] + std::abs(a - inner[0]);
      cur[0] = left;
      j = 1;
    } else {
      left = kInf;
    }
    if (i == 0) {
      for (; j <= hi; ++j) {
        left += std::abs(a - inner[j]);
        cur[j] = left;
      }
    } else {
      for (; j <= hi; ++j) {
        const double c = std::abs(a - inner[j]);
        double best = std::min(prev[j], left) + c;
        const double diag = kSym2 ? prev[j - 1] + 2.0 * c : prev[j - 1] + c;
        if (diag < best) best = diag;
        cur[j] = best;
        left = best;
      }
    }
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

// Same recurrence, also carrying the length of the chosen path.
template <bool kSym2>
Cell WithLength(std::span<const double> outer, std::span<const double> inner,
                std::optional<std::size_t> band) {
  const std::size_t n = outer.size();
  const std::size_t m = inner.size();
  const Cell empty{kInf, 0};
  std::vector<Cell> prev(m, empty), cur(m, empty);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo = 0, hi = m - 1;
    if (band) {
      lo = i > *band ? i - *band : 0;
      if (lo >= m) break;
      hi = std::min(m - 1, i + *band);
      if (lo > 0) cur[lo - 1] = empty;
    }
    for (std::size_t j = lo; j <= hi; ++j) {
      const double c = std::abs(outer[i] - inner[j]);
      if (i == 0 && j == 0) {
        cur[0] = {c, 1};
        continue;
      }
      Cell best = empty;
      if (i > 0) {
        best = {prev[j].cost + c, prev[j].length + 1};
      }
      if (j > 0) {
        const Cell left{cur[j - 1].cost + c, cur[j - 1].length + 1};
        if (Better(left, best)) best = left;
      }
      if (i > 0 && j > 0) {
        const Cell diag{prev[j - 1].cost + (kSym2 ? 2.0 * c : c),
                        prev[j - 1].length + 1};
        if (Better(diag, best)) best = diag;
      }
      cur[j] = best;
    }
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

void CheckSeries(std::span<const double> s, const char* name) {
  if (s.empty()) throw DtwError(std::string("empty series ") + name);
  for (double v : s) {
    if (!std::isfinite(v)) {
      throw DtwError(std::string("non-finite value in series ") + name);
    }
  }
}

}  // namespace

std::string_view ToString(StepPattern p) {
  return p == StepPattern::kSymmetric1 ? "symmetric1" : "symmetric2";
}

std::string_view ToString(DistanceNormalization n) {
  return n == DistanceNormalization::kNone ? "none" : "path_normalized";
}

std::optional<StepPattern> ParseStepPattern(std::string_view s) {
  if (s == "symmetric1") return StepPattern::kSymmetric1;
  if (s == "symmetric2") return StepPattern::kSymmetric2;
  return std::nullopt;
}

std::optional<DistanceNormalization> ParseDistanceNormalization(
    std::string_view s) {
  if (s == "none") return DistanceNormalization::kNone;
  if (s == "path_normalized" || s == "path") {
    return DistanceNormalization::kPathNormalized;
  }
  return std::nullopt;
}

std::string ToString(const DtwConfig& config) {
  std::string s = std::string(ToString(config.step_pattern)) + "," +
                  std::string(ToString(config.normalization));
  if (config.band) s += ",band=" + std::to_string(*config.band);
  return s;
}

double DtwDistance(std::span<const double> x, std::span<const double> y,
                   const DtwConfig& config) {
  CheckSeries(x, "x");
  CheckSeries(y, "y");
  const std::size_t diff = x.size() > y.size() ? x.size() - y.size()
                                               : y.size() - x.size();
  if (config.band && *config.band < diff) {
    throw DtwError("no feasible path: band narrower than length difference");
  }
  std::span<const double> outer = x, inner = y;
  if (inner.size() > outer.size()) std::swap(outer, inner);

  const bool sym2 = config.step_pattern == StepPattern::kSymmetric2;
  const bool by_path = !sym2 && config.normalization ==
                                    DistanceNormalization::kPathNormalized;
  double distance;
  if (by_path) {
    const Cell cell = WithLength<false>(outer, inner, config.band);
    if (!std::isfinite(cell.cost)) throw DtwError("no feasible path");
    distance = cell.cost / static_cast<double>(cell.length);
  } else {
    distance = sym2 ? CostOnly<true>(outer, inner, config.band)
                    : CostOnly<false>(outer, inner, config.band);
    if (!std::isfinite(distance)) throw DtwError("no feasible path");
    if (sym2 && config.normalization == DistanceNormalization::kPathNormalized) {
      distance /= static_cast<double>(x.size() + y.size());
    }
  }
  return distance;
}

double ToSimilarity(double distance) {
  if (!(distance >= 0.0) || !std::isfinite(distance)) {
    throw DtwError("similarity needs a finite non-negative distance");
  }
  return 1.0 / (1.0 + distance);
}

double AccFusedDistance(const AxisSpans& x_axes, const AxisSpans& y_axes,
                        const DtwConfig& config) {
  double sum = 0.0;
  for (std::size_t a = 0; a < 3; ++a) {
    sum += DtwDistance(x_axes[a], y_axes[a], config);
  }
  return sum / 3.0;
}

double SensorDistance(const SubjectRecord& a, const SubjectRecord& b,
                      Sensor sensor, const DtwConfig& config) {
  if (sensor == Sensor::kAcc) {
    AxisSpans xa, ya;
    const auto axes = ModalitiesOf(Sensor::kAcc);
    for (std::size_t i = 0; i < 3; ++i) {
      xa[i] = a.at(axes[i]).values;
      ya[i] = b.at(axes[i]).values;
    }
    return AccFusedDistance(xa, ya, config);
  }
  const Modality m = ModalitiesOf(sensor).front();
  return DtwDistance(a.at(m).values, b.at(m).values, config);
}

SimilarityMatrix PairwiseMatrix(const std::vector<SubjectRecord>& subjects,
                                Sensor sensor, const DtwConfig& config,
                                std::size_t threads) {
  SimilarityMatrix out;
  const std::size_t n = subjects.size();
  for (const auto& s : subjects) out.ids.push_back(s.subject_id);
  out.values.assign(n * n, 1.0);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  ParallelFor(pairs.size(), threads, [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    const double sim =
        ToSimilarity(SensorDistance(subjects[i], subjects[j], sensor, config));
    out.at(i, j) = sim;
    out.at(j, i) = sim;
  });
  return out;
}

SimilarityMatrix MeanMatrix(const std::vector<SimilarityMatrix>& matrices) {
  if (matrices.empty()) throw Error("no matrices to average");
  SimilarityMatrix out = matrices.front();
  for (std::size_t k = 1; k < matrices.size(); ++k) {
    if (matrices[k].values.size() != out.values.size()) {
      throw Error("matrix size mismatch");
    }
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      out.values[i] += matrices[k].values[i];
    }
  }
  for (double& v : out.values) v /= static_cast<double>(matrices.size());
  return out;
}

void WriteMatrixCsv(const SimilarityMatrix& matrix, std::ostream& out) {
  std::string line;
  for (const auto& id : matrix.ids) line += "," + id;
  out << line << '\n';
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    line = matrix.ids[i];
    for (std::size_t j = 0; j < matrix.size(); ++j) {
      line += ',';
      textio::AppendDouble(line, matrix.at(i, j));
    }
    out << line << '\n';
  }
}

}  // namespace reident
