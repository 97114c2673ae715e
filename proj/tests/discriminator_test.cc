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

#include "footprint/discriminator.h"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "footprint/error.h"

namespace footprint::losses {
namespace {

Eigen::VectorXd RandomVector(std::mt19937_64& rng, int n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

// Max |a - n| / max(|a|, |n|) over the probed coordinates.
double RelativeError(const std::vector<double>& analytic, const std::vector<double>& numeric) {
  double err = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    err = std::max(err, std::abs(analytic[i] - numeric[i]));
    scale = std::max({scale, std::abs(analytic[i]), std::abs(numeric[i])});
  }
  return scale == 0.0 ? err : err / scale;
}

// Central differences of f over the flat parameter indices in `probes`.
template <typename F>
std::vector<double> ParamDifferences(const DiscriminatorParams& base,
                                     const std::vector<std::size_t>& probes, F&& f) {
  const double h = 1e-6;
  std::vector<double> out;
  for (const std::size_t i : probes) {
    DiscriminatorParams p = base;
    p.FlatAt(i) += h;
    const double plus = f(p);
    p.FlatAt(i) -= 2 * h;
    const double minus = f(p);
    out.push_back((plus - minus) / (2 * h));
  }
  return out;
}

std::vector<std::size_t> Probes(std::mt19937_64& rng, std::size_t count, std::size_t n) {
  std::uniform_int_distribution<std::size_t> pick(0, count - 1);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(pick(rng));
  out.push_back(count - 1);  // b3
  return out;
}

DiscriminatorParams PassThrough(const Eigen::VectorXd& w, double b) {
  const int n = static_cast<int>(w.size());
  DiscriminatorParams p = DiscriminatorParams::Zeros(n, n);
  p.w1.setIdentity();
  p.w2.setIdentity();
  p.w3 = w;
  p.b3 = b;
  return p;
}

TEST(DiscriminatorTest, ZeroWeightsGiveTheFinalBias) {
  DiscriminatorParams p = DiscriminatorParams::Zeros(kFeatureDim, 256);
  p.b3 = -0.75;
  const Discriminator d(p);
  std::mt19937_64 rng(1);
  const DiscriminatorOutput out = d.Evaluate(RandomVector(rng, kFeatureDim));
  EXPECT_EQ(out.score, -0.75);
  EXPECT_EQ(out.grad_x, Eigen::VectorXd::Zero(kFeatureDim));
  EXPECT_EQ(out.grad_params.b3, 1.0);
}

TEST(DiscriminatorTest, PassThroughLayersAreAffine) {
  std::mt19937_64 rng(2);
  const Eigen::VectorXd w = RandomVector(rng, kFeatureDim);
  const Discriminator d(PassThrough(w, 0.3));
  const Eigen::VectorXd x = RandomVector(rng, kFeatureDim, 0.01, 2.0);
  const DiscriminatorOutput out = d.Evaluate(x);
  EXPECT_NEAR(out.score, w.dot(x) + 0.3, 1e-12);
  EXPECT_LE((out.grad_x - w).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(d.InputGradient(x), out.grad_x);
  EXPECT_EQ(d.Score(x), out.score);
}

TEST(DiscriminatorTest, LeakySlopeAppliesToNegativeUnits) {
  DiscriminatorParams p = DiscriminatorParams::Zeros(1, 1);
  p.w1(0, 0) = 1.0;
  p.w2(0, 0) = 1.0;
  p.w3[0] = 1.0;
  const Discriminator d(p, 0.2);
  Eigen::VectorXd x(1);
  x[0] = -2.0;
  EXPECT_NEAR(d.Score(x), 0.2 * 0.2 * -2.0, 1e-15);
  EXPECT_NEAR(d.InputGradient(x)[0], 0.04, 1e-15);
}

TEST(DiscriminatorTest, GradientsMatchCentralDifferences) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Discriminator d = Discriminator::Random(rng(), kFeatureDim, 32);
    const Eigen::VectorXd x = RandomVector(rng, kFeatureDim);
    const DiscriminatorOutput out = d.Evaluate(x);

    std::vector<double> analytic;
    std::vector<double> numeric;
    for (int i = 0; i < kFeatureDim; ++i) {
      Eigen::VectorXd plus = x;
      Eigen::VectorXd minus = x;
      plus[i] += 1e-6;
      minus[i] -= 1e-6;
      analytic.push_back(out.grad_x[i]);
      numeric.push_back((d.Score(plus) - d.Score(minus)) / 2e-6);
    }
    EXPECT_LT(RelativeError(analytic, numeric), 1e-4) << "grad_x trial " << trial;

    const std::vector<std::size_t> probes = Probes(rng, d.params().Count(), 64);
    const std::vector<double> flat = out.grad_params.Flatten();
    analytic.clear();
    for (const std::size_t i : probes) analytic.push_back(flat[i]);
    numeric = ParamDifferences(d.params(), probes, [&](const DiscriminatorParams& p) {
      return Discriminator(p, d.leaky_slope()).Score(x);
    });
    EXPECT_LT(RelativeError(analytic, numeric), 1e-4) << "grad_params trial " << trial;
  }
}

TEST(GradientPenaltyTest, UnitNormAffineCriticHasZeroPenalty) {
  std::mt19937_64 rng(4);
  Eigen::VectorXd w = RandomVector(rng, kFeatureDim);
  w.normalize();
  const Discriminator d(PassThrough(w, 0.0));
  std::vector<Eigen::VectorXd> real;
  std::vector<Eigen::VectorXd> fake;
  for (int i = 0; i < 8; ++i) {
    real.push_back(RandomVector(rng, kFeatureDim, 0.1, 1.0));
    fake.push_back(RandomVector(rng, kFeatureDim, 0.1, 1.0));
  }
  const WganGpResult r = WganGpLosses(d, real, fake, kDefaultLambdaGp, 5);
  EXPECT_LE(r.gp, 1e-12);
}

TEST(GradientPenaltyTest, ParameterGradientMatchesCentralDifferences) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Discriminator d = Discriminator::Random(rng(), kFeatureDim, 24);
    const Eigen::VectorXd x = RandomVector(rng, kFeatureDim);
    DiscriminatorParams grad = DiscriminatorParams::Zeros(kFeatureDim, 24);
    const double gp = d.GradientPenalty(x, &grad);
    const double norm = d.InputGradient(x).norm();
    EXPECT_NEAR(gp, (norm - 1) * (norm - 1), 1e-12);

    const std::vector<std::size_t> probes = Probes(rng, d.params().Count(), 64);
    const std::vector<double> flat = grad.Flatten();
    std::vector<double> analytic;
    for (const std::size_t i : probes) analytic.push_back(flat[i]);
    const std::vector<double> numeric =
        ParamDifferences(d.params(), probes, [&](const DiscriminatorParams& p) {
          return Discriminator(p, d.leaky_slope()).GradientPenalty(x, nullptr);
        });
    EXPECT_LT(RelativeError(analytic, numeric), 1e-4) << trial;
  }
}

TEST(WganGpTest, IdenticalBatchesCancelAndLambdaZeroIgnoresSeed) {
  std::mt19937_64 rng(6);
  const Discriminator d = Discriminator::Random(9, kFeatureDim, 16);
  std::vector<Eigen::VectorXd> real;
  std::vector<Eigen::VectorXd> fake;
  for (int i = 0; i < 5; ++i) {
    real.push_back(RandomVector(rng, kFeatureDim));
    fake.push_back(RandomVector(rng, kFeatureDim));
  }
  const WganGpResult same = WganGpLosses(d, real, real, 0.0, 1);
  EXPECT_EQ(same.disc_loss, 0.0);

  const WganGpResult a = WganGpLosses(d, real, fake, 0.0, 1);
  const WganGpResult b = WganGpLosses(d, real, fake, 0.0, 987654321);
  EXPECT_EQ(a.disc_loss, b.disc_loss);
  EXPECT_EQ(a.gen_loss, b.gen_loss);

  double mean_fake = 0.0;
  double mean_real = 0.0;
  for (int i = 0; i < 5; ++i) {
    mean_fake += d.Score(fake[i]) / 5;
    mean_real += d.Score(real[i]) / 5;
  }
  const WganGpResult c = WganGpLosses(d, real, fake, 10.0, 3);
  EXPECT_NEAR(c.gen_loss, -mean_fake, 1e-12);
  EXPECT_NEAR(c.disc_loss, mean_fake - mean_real + 10.0 * c.gp, 1e-12);
  EXPECT_EQ(WganGpLosses(d, real, fake, 10.0, 3).gp, c.gp);
}

TEST(WganGpTest, DiscriminatorGradientMatchesCentralDifferences) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const Discriminator d = Discriminator::Random(rng(), kFeatureDim, 16);
    std::vector<Eigen::VectorXd> real;
    std::vector<Eigen::VectorXd> fake;
    for (int i = 0; i < 3; ++i) {
      real.push_back(RandomVector(rng, kFeatureDim));
      fake.push_back(RandomVector(rng, kFeatureDim));
    }
    const std::uint64_t seed = rng();
    DiscriminatorParams grad;
    WganGpLosses(d, real, fake, kDefaultLambdaGp, seed, &grad);
    const std::vector<std::size_t> probes = Probes(rng, d.params().Count(), 48);
    const std::vector<double> flat = grad.Flatten();
    std::vector<double> analytic;
    for (const std::size_t i : probes) analytic.push_back(flat[i]);
    const std::vector<double> numeric =
        ParamDifferences(d.params(), probes, [&](const DiscriminatorParams& p) {
          return WganGpLosses(Discriminator(p, d.leaky_slope()), real, fake, kDefaultLambdaGp,
                              seed)
              .disc_loss;
        });
    EXPECT_LT(RelativeError(analytic, numeric), 1e-4) << trial;
  }
}

TEST(DiscriminatorTest, RejectsBadInputs) {
  const Discriminator d = Discriminator::Random(1, 8, 4);
  EXPECT_THROW(d.Score(Eigen::VectorXd::Zero(7)), Error);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(8);
  x[3] = std::nan("");
  try {
    d.Evaluate(x);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFiniteValue);
  }
  DiscriminatorParams p = d.params();
  p.w2(0, 0) = INFINITY;
  EXPECT_THROW(Discriminator{p}, Error);
  p = d.params();
  p.b2.resize(3);
  EXPECT_THROW(Discriminator{p}, Error);
  const std::vector<Eigen::VectorXd> none;
  const std::vector<Eigen::VectorXd> one = {Eigen::VectorXd::Zero(8)};
  const std::vector<Eigen::VectorXd> two = {Eigen::VectorXd::Zero(8), Eigen::VectorXd::Zero(8)};
  EXPECT_THROW(WganGpLosses(d, none, none, 10, 0), Error);
  EXPECT_THROW(WganGpLosses(d, one, two, 10, 0), Error);
}

TEST(DiscriminatorParamsTest, FlattenRoundTrip) {
  const Discriminator d = Discriminator::Random(11, 6, 5);
  DiscriminatorParams p = d.params();
  const std::vector<double> flat = p.Flatten();
  ASSERT_EQ(flat.size(), p.Count());
  EXPECT_EQ(p.Count(), 5u * 6 + 5 + 5 * 5 + 5 + 5 + 1);
  for (std::size_t i = 0; i < flat.size(); ++i) EXPECT_EQ(p.FlatAt(i), flat[i]);
  DiscriminatorParams q = DiscriminatorParams::Zeros(6, 5);
  q.Unflatten(flat);
  EXPECT_EQ(q.Flatten(), flat);
}

}  // namespace
}  // namespace footprint::losses
