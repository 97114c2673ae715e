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

#include "footprint/gradient_check.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Core>

#include "footprint/discriminator.h"
#include "footprint/grid.h"
#include "footprint/losses.h"
#include "footprint/random.h"

namespace footprint::losses {
namespace {

constexpr int kCblSide = 8;
constexpr int kHidden = 256;
constexpr std::size_t kParamProbes = 48;
constexpr int kBatch = 4;

std::vector<std::size_t> ProbeCoordinates(std::size_t count, std::size_t probes, CounterRng& rng) {
  std::vector<std::size_t> out;
  out.reserve(probes);
  for (std::size_t k = 0; k < probes; ++k) out.push_back(static_cast<std::size_t>(rng.Below(count)));
  return out;
}

Eigen::VectorXd RandomFeature(CounterRng& rng, int dim) {
  Eigen::VectorXd x(dim);
  for (int i = 0; i < dim; ++i) x[i] = rng.Uniform(-1.0, 1.0);
  return x;
}

std::vector<double> Pick(const std::vector<double>& all, std::span<const std::size_t> coords) {
  std::vector<double> out;
  out.reserve(coords.size());
  for (const std::size_t i : coords) out.push_back(all[i]);
  return out;
}

double CblTrial(CounterRng& rng) {
  ScoreMap p(kCblSide, kCblSide);
  BinaryMap y(kCblSide, kCblSide);
  for (std::size_t i = 0; i < p.size(); ++i) {
    p.at_flat(i) = rng.Uniform(0.02, 0.98);
    y.at_flat(i) = rng.Uniform01() < 0.3 ? 1 : 0;
  }
  const ClassWeights w = ComputeClassWeights(y);
  const LossAndGradient analytic = ClassBalancedLoss(p, y, w);
  std::vector<double> x(p.values().begin(), p.values().end());
  std::vector<std::size_t> coords(x.size());
  std::iota(coords.begin(), coords.end(), 0);
  const auto numeric = CentralDifferences(
      [&](std::span<const double> v) {
        ScoreMap q(kCblSide, kCblSide);
        std::copy(v.begin(), v.end(), q.values().begin());
        return ClassBalancedLoss(q, y, w).loss;
      },
      x, coords);
  return RelativeError(analytic.gradient.values(), numeric);
}

double DiscriminatorInputTrial(CounterRng& rng) {
  const Discriminator d = Discriminator::Random(rng.Next(), kFeatureDim, kHidden);
  const Eigen::VectorXd x = RandomFeature(rng, kFeatureDim);
  const DiscriminatorOutput out = d.Evaluate(x);
  std::vector<double> v(x.data(), x.data() + x.size());
  std::vector<std::size_t> coords(v.size());
  std::iota(coords.begin(), coords.end(), 0);
  const auto numeric = CentralDifferences(
      [&](std::span<const double> z) {
        return d.Score(Eigen::Map<const Eigen::VectorXd>(z.data(), static_cast<Eigen::Index>(z.size())));
      },
      v, coords);
  return RelativeError(std::span<const double>(out.grad_x.data(), out.grad_x.size()), numeric);
}

// Parameter-gradient trials perturb one parameter of a private copy in place.
template <typename Objective>
double ParameterTrial(const Discriminator& d, const std::vector<double>& analytic_flat,
                      CounterRng& rng, Objective objective) {
  Discriminator work = d;
  const auto coords = ProbeCoordinates(work.params().Count(), kParamProbes, rng);
  std::vector<double> numeric;
  numeric.reserve(coords.size());
  for (const std::size_t i : coords) {
    double& theta = work.mutable_params().FlatAt(i);
    const double saved = theta;
    theta = saved + kFiniteDifferenceStep;
    const double plus = objective(work);
    theta = saved - kFiniteDifferenceStep;
    const double minus = objective(work);
    theta = saved;
    numeric.push_back((plus - minus) / (2.0 * kFiniteDifferenceStep));
  }
  return RelativeError(Pick(analytic_flat, coords), numeric);
}

double DiscriminatorParamTrial(CounterRng& rng) {
  const Discriminator d = Discriminator::Random(rng.Next(), kFeatureDim, kHidden);
  const Eigen::VectorXd x = RandomFeature(rng, kFeatureDim);
  const auto analytic = d.Evaluate(x).grad_params.Flatten();
  return ParameterTrial(d, analytic, rng, [&](const Discriminator& e) { return e.Score(x); });
}

double GradientPenaltyTrial(CounterRng& rng) {
  const Discriminator d = Discriminator::Random(rng.Next(), kFeatureDim, kHidden);
  const Eigen::VectorXd x = RandomFeature(rng, kFeatureDim);
  DiscriminatorParams grad;
  d.GradientPenalty(x, &grad);
  return ParameterTrial(d, grad.Flatten(), rng,
                        [&](const Discriminator& e) { return e.GradientPenalty(x, nullptr); });
}

double WganGpTrial(CounterRng& rng) {
  const Discriminator d = Discriminator::Random(rng.Next(), kFeatureDim, kHidden);
  std::vector<Eigen::VectorXd> real;
  std::vector<Eigen::VectorXd> fake;
  for (int i = 0; i < kBatch; ++i) {
    real.push_back(RandomFeature(rng, kFeatureDim));
    fake.push_back(RandomFeature(rng, kFeatureDim));
  }
  const std::uint64_t alpha_seed = rng.Next();
  DiscriminatorParams grad;
  WganGpLosses(d, real, fake, kDefaultLambdaGp, alpha_seed, &grad);
  const auto analytic = grad.Flatten();
  return ParameterTrial(d, analytic, rng, [&](const Discriminator& e) {
    return WganGpLosses(e, real, fake, kDefaultLambdaGp, alpha_seed).disc_loss;
  });
}

}  // namespace

std::vector<double> CentralDifferences(const std::function<double(std::span<const double>)>& f,
                                       std::vector<double>& x,
                                       std::span<const std::size_t> coordinates, double step) {
  std::vector<double> out;
  out.reserve(coordinates.size());
  for (const std::size_t i : coordinates) {
    const double saved = x[i];
    x[i] = saved + step;
    const double plus = f(x);
    x[i] = saved - step;
    const double minus = f(x);
    x[i] = saved;
    out.push_back((plus - minus) / (2.0 * step));
  }
  return out;
}

double RelativeError(std::span<const double> analytic, std::span<const double> numeric) {
  double diff = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < analytic.size() && i < numeric.size(); ++i) {
    diff = std::max(diff, std::abs(analytic[i] - numeric[i]));
    scale = std::max({scale, std::abs(analytic[i]), std::abs(numeric[i])});
  }
  if (analytic.size() != numeric.size()) return std::numeric_limits<double>::infinity();
  return scale == 0.0 ? 0.0 : diff / scale;
}

std::vector<GradientCheckRow> RunLossesCheck(int trials, std::uint64_t seed, double tolerance) {
  struct Kernel {
    const char* name;
    double (*trial)(CounterRng&);
  };
  const Kernel kernels[] = {
      {"cbl_loss/d_scores", &CblTrial},
      {"discriminator/d_input", &DiscriminatorInputTrial},
      {"discriminator/d_params", &DiscriminatorParamTrial},
      {"gradient_penalty/d_params", &GradientPenaltyTrial},
      {"wgan_gp_disc_loss/d_params", &WganGpTrial},
  };
  std::vector<GradientCheckRow> rows;
  std::uint64_t stream = 0;
  for (const Kernel& k : kernels) {
    CounterRng rng(seed, ++stream);
    GradientCheckRow row;
    row.kernel = k.name;
    row.trials = trials;
    for (int t = 0; t < trials; ++t) {
      row.max_relative_error = std::max(row.max_relative_error, k.trial(rng));
    }
    row.passed = row.max_relative_error < tolerance;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace footprint::losses
