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

#include "footprint/losses.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "footprint/error.h"
#include "footprint/random.h"

namespace footprint::losses {

ScoreMap ClampScores(const ScoreMap& scores) {
  ScoreMap out = scores;
  for (double& v : out.values()) {
    if (std::isnan(v)) throw Error(ErrorCode::kNonFiniteValue, "score is NaN");
    v = std::clamp(v, kScoreClamp, 1.0 - kScoreClamp);
  }
  return out;
}

ClassWeights ComputeClassWeights(const BinaryMap& labels) {
  const std::size_t total = labels.size();
  std::size_t positives = 0;
  for (const auto y : labels.values()) positives += y != 0 ? 1 : 0;
  const std::size_t negatives = total - positives;
  if (positives == 0 && negatives == 0) return ClassWeights{0.0, 0.0};
  if (positives == 0) return ClassWeights{0.0, 1.0};
  if (negatives == 0) return ClassWeights{1.0, 0.0};
  const double n = static_cast<double>(total);
  return ClassWeights{n / (2.0 * static_cast<double>(positives)),
                      n / (2.0 * static_cast<double>(negatives))};
}

LossAndGradient ClassBalancedLoss(const ScoreMap& scores, const BinaryMap& labels,
                                  const ClassWeights& weights) {
  RequireSameShape(scores, labels, "class-balanced loss");
  const ScoreMap p = ClampScores(scores);
  LossAndGradient out;
  out.gradient = Grid<double>(p.rows(), p.cols(), 0.0);
  if (p.empty()) return out;
  const double inv_n = 1.0 / static_cast<double>(p.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p.at_flat(i);
    if (labels.at_flat(i) != 0) {
      sum += -weights.positive * std::log(pi);
      out.gradient.at_flat(i) = -weights.positive / pi * inv_n;
    } else {
      sum += -weights.negative * std::log(1.0 - pi);
      out.gradient.at_flat(i) = weights.negative / (1.0 - pi) * inv_n;
    }
  }
  out.loss = sum * inv_n;
  return out;
}

void SamplerParams::Validate() const {
  if (!(top_percent > 0.0 && top_percent <= 100.0)) {
    throw Error(ErrorCode::kInvalidArgument, "top_percent must be in (0, 100]");
  }
  if (num_samples < 1) throw Error(ErrorCode::kInvalidArgument, "num_samples must be >= 1");
}

std::vector<Cell> SampleHardFalsePositives(const ScoreMap& scores, const BinaryMap& labels,
                                           const SamplerParams& params) {
  RequireSameShape(scores, labels, "hard false positive sampler");
  params.Validate();
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (std::isnan(scores.at_flat(i))) throw Error(ErrorCode::kNonFiniteValue, "score is NaN");
    if (labels.at_flat(i) == 0) pool.push_back(i);
  }
  if (pool.empty()) return {};

  const auto keep = static_cast<std::size_t>(
      std::ceil(params.top_percent * static_cast<double>(pool.size()) / 100.0));
  const std::size_t kept = std::clamp<std::size_t>(keep, 1, pool.size());
  // pool is already row-major, so a stable ordering on score keeps the tie rule.
  std::stable_sort(pool.begin(), pool.end(), [&](std::size_t a, std::size_t b) {
    return scores.at_flat(a) > scores.at_flat(b);
  });
  pool.resize(kept);

  // Partial Fisher-Yates.
  CounterRng rng(params.seed);
  const std::size_t draws = std::min<std::size_t>(static_cast<std::size_t>(params.num_samples), kept);
  std::vector<Cell> out;
  out.reserve(draws);
  for (std::size_t k = 0; k < draws; ++k) {
    const std::size_t j = k + static_cast<std::size_t>(rng.Below(kept - k));
    std::swap(pool[k], pool[j]);
    out.push_back(Cell{static_cast<int>(pool[k] / static_cast<std::size_t>(scores.cols())),
                       static_cast<int>(pool[k] % static_cast<std::size_t>(scores.cols()))});
  }
  return out;
}

}  // namespace footprint::losses
