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

#ifndef REIDENT_DTW_HPP_
#define REIDENT_DTW_HPP_

// Dynamic time warping between univariate series.
//
// Local cost is |x_i - y_j|. With g the cumulative cost matrix:
//   symmetric1: g(i,j) = c(i,j) + min(g(i-1,j-1), g(i-1,j), g(i,j-1))
//   symmetric2: g(i,j) = min(g(i-1,j-1) + 2c(i,j), g(i-1,j) + c(i,j),
//                            g(i,j-1) + c(i,j))
// and g(1,1) = c(1,1) for both, as in the dtw-python/R dtw packages.
//
// Path normalization divides symmetric2 by len(x)+len(y) and symmetric1 by
// the number of cells on the optimal path. When several paths share the
// optimal cost, symmetric1 normalizes by the shortest of them.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reident/core.hpp"

namespace reident {

enum class StepPattern { kSymmetric1, kSymmetric2 };
enum class DistanceNormalization { kNone, kPathNormalized };

std::string_view ToString(StepPattern p);
std::string_view ToString(DistanceNormalization n);
std::optional<StepPattern> ParseStepPattern(std::string_view s);
std::optional<DistanceNormalization> ParseDistanceNormalization(
    std::string_view s);

struct DtwConfig {
  StepPattern step_pattern = StepPattern::kSymmetric2;
  // Sakoe-Chiba half-width |i - j| <= band. Must be >= |len(x) - len(y)|.
  std::optional<std::size_t> band;
  DistanceNormalization normalization = DistanceNormalization::kPathNormalized;
};

// "symmetric2,path_normalized[,band=w]".
std::string ToString(const DtwConfig& config);

// Throws DtwError on empty or non-finite input, or when the band admits no
// path. Memory is O(min(len(x), len(y))).
double DtwDistance(std::span<const double> x, std::span<const double> y,
                   const DtwConfig& config = {});

// 1 / (1 + d). Strictly decreasing, so ranking by similarity is the reverse
// of ranking by distance. Throws DtwError for negative or non-finite d.
double ToSimilarity(double distance);

using AxisSpans = std::array<std::span<const double>, 3>;

// Mean of the three per-axis distances.
double AccFusedDistance(const AxisSpans& x_axes, const AxisSpans& y_axes,
                        const DtwConfig& config = {});

// Distance between two records on one logical sensor.
double SensorDistance(const SubjectRecord& a, const SubjectRecord& b,
                      Sensor sensor, const DtwConfig& config = {});

// N x N similarity matrix, row-major, rows/columns in input order.
struct SimilarityMatrix {
  std::vector<std::string> ids;
  std::vector<double> values;

  std::size_t size() const { return ids.size(); }
  double at(std::size_t i, std::size_t j) const {
    return values[i * ids.size() + j];
  }
  double& at(std::size_t i, std::size_t j) {
    return values[i * ids.size() + j];
  }
};

// Pairwise similarities for one sensor. Both step patterns are symmetric,
// so only the upper triangle is computed; the diagonal is 1.
SimilarityMatrix PairwiseMatrix(const std::vector<SubjectRecord>& subjects,
                                Sensor sensor, const DtwConfig& config = {},
                                std::size_t threads = 0);

// Element-wise mean of equally sized matrices.
SimilarityMatrix MeanMatrix(const std::vector<SimilarityMatrix>& matrices);

// Header row ",id1,id2,..."; one row per subject.
void WriteMatrixCsv(const SimilarityMatrix& matrix, std::ostream& out);

}  // namespace reident

#endif  // REIDENT_DTW_HPP_
