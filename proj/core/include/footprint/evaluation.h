/*
 * Copyright 2026 The Footprint Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FOOTPRINT_EVALUATION_H_
#define FOOTPRINT_EVALUATION_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "footprint/geometry.h"
#include "footprint/grid.h"
#include "footprint/metrics_report.h"

namespace footprint::eval {

inline constexpr double kDefaultThreshold = 0.5;
inline constexpr int kDefaultWindow = 5;
inline constexpr double kDefaultKlEpsilon = 1e-6;

// Cell = 1 iff score > threshold.
BinaryMap Threshold(const ScoreMap& scores, double threshold = kDefaultThreshold);

// Counts label-grid cells. With G = |gt|:
//   pred_valid_tp = |pred & gt| / G, missing_fn = |gt & !pred| / G,
//   expansion = |pred & !gt| / G, pred_total = pred_valid_tp + expansion.
// Throws ShapeMismatch, EmptyGroundTruth.
MetricsReport ExpansionMetrics(const BinaryMap& pred, const BinaryMap& gt);

// All-points average precision over cells ranked by descending score
// (row-major tie-break): sum over positives of precision at that rank,
// divided by the number of positives. Throws ShapeMismatch, EmptyGroundTruth.
double AveragePrecision(const ScoreMap& scores, const BinaryMap& gt);

// Unweighted mean of per-image AP. Throws InvalidArgument if empty.
double MeanAveragePrecision(std::span<const std::pair<ScoreMap, BinaryMap>> images);

struct SemanticMap {
  Grid<int> labels;
  int num_classes = 0;

  // Throws InvalidArgument unless every id is in [0, num_classes).
  void Validate() const;
};

using ClassHistogram = std::vector<double>;

// For each location (pixel containing (u, v)) take the most frequent class in
// the window x window neighborhood clipped at the border, ties to the smallest
// id, and return the normalized histogram of those modes.
// Throws EmptyLocations, InvalidArgument (even window, location outside).
ClassHistogram SemanticHistogram(std::span<const geometry::Pixel> locations,
                                 const SemanticMap& semantic, int window = kDefaultWindow);

// KL(p || q) in nats after adding epsilon to every bin of both and
// renormalizing. Throws ShapeMismatch, InvalidArgument.
double KlDivergence(const ClassHistogram& p, const ClassHistogram& q,
                    double epsilon = kDefaultKlEpsilon);

// n draws with replacement, P(cell) proportional to score (uniform if all
// zero). Returned at full resolution: ((c + 0.5) s, (r + 0.5) s).
std::vector<geometry::Pixel> SampleLocations(const ScoreMap& scores, std::size_t n,
                                             std::uint64_t seed, int downsample = 1);

}  // namespace footprint::eval

#endif  // FOOTPRINT_EVALUATION_H_
