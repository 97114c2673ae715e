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

#ifndef FOOTPRINT_GRADIENT_CHECK_H_
#define FOOTPRINT_GRADIENT_CHECK_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace footprint::losses {

inline constexpr double kFiniteDifferenceStep = 1e-6;
inline constexpr double kGradientTolerance = 1e-4;

// Central difference (f(x + h e_i) - f(x - h e_i)) / 2h for each requested
// coordinate i. `x` is restored before returning.
std::vector<double> CentralDifferences(const std::function<double(std::span<const double>)>& f,
                                       std::vector<double>& x,
                                       std::span<const std::size_t> coordinates,
                                       double step = kFiniteDifferenceStep);

// max_i |a_i - n_i| / max(max_i |a_i|, max_i |n_i|); 0 when both are zero.
double RelativeError(std::span<const double> analytic, std::span<const double> numeric);

struct GradientCheckRow {
  std::string kernel;
  int trials = 0;
  double max_relative_error = 0.0;
  bool passed = false;
};

// The self-test behind `footprint losses-check`: random trials of the
// class-balanced loss gradient, discriminator input and parameter gradients,
// the gradient-penalty parameter gradient and the full WGAN-GP critic loss
// gradient, each against central differences.
std::vector<GradientCheckRow> RunLossesCheck(int trials, std::uint64_t seed,
                                             double tolerance = kGradientTolerance);

}  // namespace footprint::losses

#endif  // FOOTPRINT_GRADIENT_CHECK_H_
