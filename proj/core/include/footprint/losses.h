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

#ifndef FOOTPRINT_LOSSES_H_
#define FOOTPRINT_LOSSES_H_

#include <cstdint>
#include <vector>

#include "footprint/grid.h"

namespace footprint::losses {

inline constexpr double kScoreClamp = 1e-7;

// Clamps every score into [kScoreClamp, 1 - kScoreClamp]. NaN is rejected.
ScoreMap ClampScores(const ScoreMap& scores);

struct ClassWeights {
  double positive = 1.0;
  double negative = 1.0;
};

// Reciprocal label frequencies, normalized so a balanced map gets (1, 1):
// c_pos = n / (2 n_pos), c_neg = n / (2 n_neg). If one class is absent its
// weight is 0 and the other class gets 1.
ClassWeights ComputeClassWeights(const BinaryMap& labels);

struct LossAndGradient {
  double loss = 0.0;
  Grid<double> gradient;  // d loss / d p, same shape as the inputs
};

// Mean over cells of  -c_pos y log p - c_neg (1 - y) log(1 - p), with p
// clamped first. The gradient is taken with respect to the clamped scores.
LossAndGradient ClassBalancedLoss(const ScoreMap& scores, const BinaryMap& labels,
                                  const ClassWeights& weights);

struct SamplerParams {
  double top_percent = 1.0;  // K in (0, 100]
  int num_samples = 10;      // N >= 1
  std::uint64_t seed = 0;

  void Validate() const;
};

// Hard false positives: among cells labeled 0, keep the ceil(K% * pool) with
// the highest score (ties by row-major order) and draw min(N, kept) of them
// uniformly without replacement. The result is in draw order.
std::vector<Cell> SampleHardFalsePositives(const ScoreMap& scores, const BinaryMap& labels,
                                           const SamplerParams& params);

}  // namespace footprint::losses

#endif  // FOOTPRINT_LOSSES_H_
