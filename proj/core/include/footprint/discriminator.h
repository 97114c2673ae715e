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

#ifndef FOOTPRINT_DISCRIMINATOR_H_
#define FOOTPRINT_DISCRIMINATOR_H_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace footprint::losses {

inline constexpr int kFeatureDim = 256;

// Parameters (or parameter-shaped gradients) of the three-layer critic
//   z1 = W1 x + b1,  a1 = leaky(z1)
//   z2 = W2 a1 + b2, a2 = leaky(z2)
//   score = w3 . a2 + b3
struct DiscriminatorParams {
  Eigen::MatrixXd w1;  // hidden x input
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;  // hidden x hidden
  Eigen::VectorXd b2;
  Eigen::VectorXd w3;  // hidden
  double b3 = 0.0;

  static DiscriminatorParams Zeros(int input_dim, int hidden);

  std::size_t Count() const;
  // Flat view in the order w1, b1, w2, b2, w3, b3 (matrices column-major).
  std::vector<double> Flatten() const;
  void Unflatten(std::span<const double> flat);
  // Element `i` of the Flatten() order.
  double& FlatAt(std::size_t i);

  bool AllFinite() const;
  DiscriminatorParams& operator+=(const DiscriminatorParams& other);
  DiscriminatorParams& operator*=(double scale);
};

struct DiscriminatorOutput {
  double score = 0.0;
  Eigen::VectorXd grad_x;
  DiscriminatorParams grad_params;
};

class Discriminator {
 public:
  static constexpr double kDefaultLeakySlope = 0.2;

  // Throws InvalidArgument on inconsistent shapes and NonFiniteValue on
  // non-finite parameters.
  Discriminator(DiscriminatorParams params, double leaky_slope = kDefaultLeakySlope);

  // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights and zero biases.
  static Discriminator Random(std::uint64_t seed, int input_dim = kFeatureDim,
                              int hidden = 256, double leaky_slope = kDefaultLeakySlope);

  int input_dim() const { return static_cast<int>(params_.w1.cols()); }
  int hidden() const { return static_cast<int>(params_.w1.rows()); }
  double leaky_slope() const { return leaky_slope_; }
  const DiscriminatorParams& params() const { return params_; }
  // For in-place perturbation (finite differences, optimizers). Callers keep
  // shapes unchanged and values finite.
  DiscriminatorParams& mutable_params() { return params_; }

  double Score(const Eigen::VectorXd& x) const;

  // Forward pass with exact gradients of the score w.r.t. x and every
  // parameter. Throws ShapeMismatch / NonFiniteValue on bad input.
  DiscriminatorOutput Evaluate(const Eigen::VectorXd& x) const;

  // Input gradient of the score only (cheaper than Evaluate).
  Eigen::VectorXd InputGradient(const Eigen::VectorXd& x) const;

  // Penalty (|grad_x score(x)|_2 - 1)^2 and its gradient w.r.t. the
  // parameters. The activation pattern is treated as locally constant, so
  // bias gradients are zero.
  double GradientPenalty(const Eigen::VectorXd& x, DiscriminatorParams* grad_params) const;

 private:
  void CheckInput(const Eigen::VectorXd& x) const;

  DiscriminatorParams params_;
  double leaky_slope_;
};

struct WganGpResult {
  double disc_loss = 0.0;  // mean D(fake) - mean D(real) + lambda * gp
  double gen_loss = 0.0;   // -mean D(fake)
  double gp = 0.0;         // mean (|grad D(x_hat)| - 1)^2
};

inline constexpr double kDefaultLambdaGp = 10.0;

// x_hat_i = alpha_i real_i + (1 - alpha_i) fake_i with alpha_i drawn in pair
// order from CounterRng(seed). Batches must be non-empty and equally sized.
// When `disc_grad` is non-null it receives d disc_loss / d params.
WganGpResult WganGpLosses(const Discriminator& d, std::span<const Eigen::VectorXd> real,
                          std::span<const Eigen::VectorXd> fake, double lambda_gp,
                          std::uint64_t seed, DiscriminatorParams* disc_grad = nullptr);

}  // namespace footprint::losses

#endif  // FOOTPRINT_DISCRIMINATOR_H_
