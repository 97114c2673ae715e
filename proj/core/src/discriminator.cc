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
#include <string>

#include "footprint/error.h"
#include "footprint/random.h"

namespace footprint::losses {
namespace {

struct Forward {
  Eigen::VectorXd a1;
  Eigen::VectorXd a2;
  Eigen::VectorXd m1;  // leaky derivative at z1
  Eigen::VectorXd m2;
  double score = 0.0;
};

void Leaky(const Eigen::VectorXd& z, double slope, Eigen::VectorXd* a, Eigen::VectorXd* m) {
  a->resize(z.size());
  m->resize(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const bool pos = z[i] > 0.0;
    (*m)[i] = pos ? 1.0 : slope;
    (*a)[i] = pos ? z[i] : slope * z[i];
  }
}

Forward Run(const DiscriminatorParams& p, double slope, const Eigen::VectorXd& x) {
  Forward f;
  Leaky(p.w1 * x + p.b1, slope, &f.a1, &f.m1);
  Leaky(p.w2 * f.a1 + p.b2, slope, &f.a2, &f.m2);
  f.score = p.w3.dot(f.a2) + p.b3;
  return f;
}

template <typename Block>
void Append(const Block& b, std::vector<double>& out) {
  out.insert(out.end(), b.data(), b.data() + b.size());
}

template <typename Block>
std::size_t Take(Block& b, std::span<const double> flat, std::size_t at) {
  for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = flat[at + static_cast<std::size_t>(i)];
  return at + static_cast<std::size_t>(b.size());
}

}  // namespace

DiscriminatorParams DiscriminatorParams::Zeros(int input_dim, int hidden) {
  DiscriminatorParams p;
  p.w1 = Eigen::MatrixXd::Zero(hidden, input_dim);
  p.b1 = Eigen::VectorXd::Zero(hidden);
  p.w2 = Eigen::MatrixXd::Zero(hidden, hidden);
  p.b2 = Eigen::VectorXd::Zero(hidden);
  p.w3 = Eigen::VectorXd::Zero(hidden);
  p.b3 = 0.0;
  return p;
}

std::size_t DiscriminatorParams::Count() const {
  return static_cast<std::size_t>(w1.size() + b1.size() + w2.size() + b2.size() + w3.size() + 1);
}

std::vector<double> DiscriminatorParams::Flatten() const {
  std::vector<double> out;
  out.reserve(Count());
  Append(w1, out);
  Append(b1, out);
  Append(w2, out);
  Append(b2, out);
  Append(w3, out);
  out.push_back(b3);
  return out;
}

void DiscriminatorParams::Unflatten(std::span<const double> flat) {
  if (flat.size() != Count()) {
    throw Error(ErrorCode::kShapeMismatch, "flat parameter vector has wrong length");
  }
  std::size_t at = 0;
  at = Take(w1, flat, at);
  at = Take(b1, flat, at);
  at = Take(w2, flat, at);
  at = Take(b2, flat, at);
  at = Take(w3, flat, at);
  b3 = flat[at];
}

double& DiscriminatorParams::FlatAt(std::size_t i) {
  if (i < static_cast<std::size_t>(w1.size())) return w1.data()[i];
  i -= static_cast<std::size_t>(w1.size());
  if (i < static_cast<std::size_t>(b1.size())) return b1.data()[i];
  i -= static_cast<std::size_t>(b1.size());
  if (i < static_cast<std::size_t>(w2.size())) return w2.data()[i];
  i -= static_cast<std::size_t>(w2.size());
  if (i < static_cast<std::size_t>(b2.size())) return b2.data()[i];
  i -= static_cast<std::size_t>(b2.size());
  if (i < static_cast<std::size_t>(w3.size())) return w3.data()[i];
  i -= static_cast<std::size_t>(w3.size());
  if (i == 0) return b3;
  throw Error(ErrorCode::kShapeMismatch, "flat parameter index out of range");
}

bool DiscriminatorParams::AllFinite() const {
  return w1.allFinite() && b1.allFinite() && w2.allFinite() && b2.allFinite() &&
         w3.allFinite() && std::isfinite(b3);
}

DiscriminatorParams& DiscriminatorParams::operator+=(const DiscriminatorParams& o) {
  w1 += o.w1;
  b1 += o.b1;
  w2 += o.w2;
  b2 += o.b2;
  w3 += o.w3;
  b3 += o.b3;
  return *this;
}

DiscriminatorParams& DiscriminatorParams::operator*=(double s) {
  w1 *= s;
  b1 *= s;
  w2 *= s;
  b2 *= s;
  w3 *= s;
  b3 *= s;
  return *this;
}

Discriminator::Discriminator(DiscriminatorParams params, double leaky_slope)
    : params_(std::move(params)), leaky_slope_(leaky_slope) {
  const auto h = params_.w1.rows();
  if (h < 1 || params_.w1.cols() < 1 || params_.b1.size() != h || params_.w2.rows() != h ||
      params_.w2.cols() != h || params_.b2.size() != h || params_.w3.size() != h) {
    throw Error(ErrorCode::kInvalidArgument, "inconsistent discriminator parameter shapes");
  }
  if (!params_.AllFinite() || !std::isfinite(leaky_slope_)) {
    throw Error(ErrorCode::kNonFiniteValue, "discriminator parameters must be finite");
  }
}

Discriminator Discriminator::Random(std::uint64_t seed, int input_dim, int hidden,
                                    double leaky_slope) {
  if (input_dim < 1 || hidden < 1) {
    throw Error(ErrorCode::kInvalidArgument, "discriminator dimensions must be positive");
  }
  CounterRng rng(seed);
  DiscriminatorParams p = DiscriminatorParams::Zeros(input_dim, hidden);
  const double s1 = 1.0 / std::sqrt(static_cast<double>(input_dim));
  const double s2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (Eigen::Index i = 0; i < p.w1.size(); ++i) p.w1.data()[i] = rng.Uniform(-s1, s1);
  for (Eigen::Index i = 0; i < p.w2.size(); ++i) p.w2.data()[i] = rng.Uniform(-s2, s2);
  for (Eigen::Index i = 0; i < p.w3.size(); ++i) p.w3[i] = rng.Uniform(-s2, s2);
  return Discriminator(std::move(p), leaky_slope);
}

void Discriminator::CheckInput(const Eigen::VectorXd& x) const {
  if (x.size() != input_dim()) {
    throw Error(ErrorCode::kShapeMismatch, "feature vector has " + std::to_string(x.size()) +
                                               " entries, expected " +
                                               std::to_string(input_dim()));
  }
  if (!x.allFinite()) throw Error(ErrorCode::kNonFiniteValue, "feature vector is not finite");
}

double Discriminator::Score(const Eigen::VectorXd& x) const {
  CheckInput(x);
  return Run(params_, leaky_slope_, x).score;
}

DiscriminatorOutput Discriminator::Evaluate(const Eigen::VectorXd& x) const {
  CheckInput(x);
  const Forward f = Run(params_, leaky_slope_, x);
  DiscriminatorOutput out;
  out.score = f.score;
  const Eigen::VectorXd delta2 = f.m2.cwiseProduct(params_.w3);
  const Eigen::VectorXd delta1 = f.m1.cwiseProduct(params_.w2.transpose() * delta2);
  out.grad_params.w3 = f.a2;
  out.grad_params.b3 = 1.0;
  out.grad_params.w2 = delta2 * f.a1.transpose();
  out.grad_params.b2 = delta2;
  out.grad_params.w1 = delta1 * x.transpose();
  out.grad_params.b1 = delta1;
  out.grad_x = params_.w1.transpose() * delta1;
  return out;
}

Eigen::VectorXd Discriminator::InputGradient(const Eigen::VectorXd& x) const {
  CheckInput(x);
  const Forward f = Run(params_, leaky_slope_, x);
  const Eigen::VectorXd delta2 = f.m2.cwiseProduct(params_.w3);
  const Eigen::VectorXd delta1 = f.m1.cwiseProduct(params_.w2.transpose() * delta2);
  return params_.w1.transpose() * delta1;
}

double Discriminator::GradientPenalty(const Eigen::VectorXd& x,
                                      DiscriminatorParams* grad_params) const {
  CheckInput(x);
  const Forward f = Run(params_, leaky_slope_, x);
  // g = W1^T (m1 . (W2^T (m2 . w3)))
  const Eigen::VectorXd delta2 = f.m2.cwiseProduct(params_.w3);
  const Eigen::VectorXd delta1 = f.m1.cwiseProduct(params_.w2.transpose() * delta2);
  const Eigen::VectorXd g = params_.w1.transpose() * delta1;
  const double norm = g.norm();
  const double penalty = (norm - 1.0) * (norm - 1.0);
  if (grad_params != nullptr) {
    *grad_params = DiscriminatorParams::Zeros(input_dim(), hidden());
    if (norm > 0.0) {
      const Eigen::VectorXd gamma = (2.0 * (norm - 1.0) / norm) * g;
      const Eigen::VectorXd rho = f.m1.cwiseProduct(params_.w1 * gamma);
      grad_params->w1 = delta1 * gamma.transpose();
      grad_params->w2 = delta2 * rho.transpose();
      grad_params->w3 = f.m2.cwiseProduct(params_.w2 * rho);
    }
  }
  return penalty;
}

WganGpResult WganGpLosses(const Discriminator& d, std::span<const Eigen::VectorXd> real,
                          std::span<const Eigen::VectorXd> fake, double lambda_gp,
                          std::uint64_t seed, DiscriminatorParams* disc_grad) {
  if (real.empty() || fake.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "WGAN-GP batches must be non-empty");
  }
  if (real.size() != fake.size()) {
    throw Error(ErrorCode::kShapeMismatch, "real and fake batches differ in size");
  }
  if (!std::isfinite(lambda_gp)) throw Error(ErrorCode::kNonFiniteValue, "lambda_gp is not finite");

  const double inv_n = 1.0 / static_cast<double>(real.size());
  CounterRng rng(seed);
  double sum_real = 0.0;
  double sum_fake = 0.0;
  double sum_gp = 0.0;
  DiscriminatorParams grad_real;
  DiscriminatorParams grad_fake;
  DiscriminatorParams grad_gp;
  DiscriminatorParams scratch;
  if (disc_grad != nullptr) {
    grad_real = DiscriminatorParams::Zeros(d.input_dim(), d.hidden());
    grad_fake = grad_real;
    grad_gp = grad_real;
  }
  for (std::size_t i = 0; i < real.size(); ++i) {
    if (real[i].size() != fake[i].size()) {
      throw Error(ErrorCode::kShapeMismatch, "real and fake features differ in width");
    }
    if (disc_grad != nullptr) {
      const DiscriminatorOutput r = d.Evaluate(real[i]);
      const DiscriminatorOutput f = d.Evaluate(fake[i]);
      sum_real += r.score;
      sum_fake += f.score;
      grad_real += r.grad_params;
      grad_fake += f.grad_params;
    } else {
      sum_real += d.Score(real[i]);
      sum_fake += d.Score(fake[i]);
    }
    const double alpha = rng.Uniform01();
    const Eigen::VectorXd x_hat = alpha * real[i] + (1.0 - alpha) * fake[i];
    sum_gp += d.GradientPenalty(x_hat, disc_grad != nullptr ? &scratch : nullptr);
    if (disc_grad != nullptr) grad_gp += scratch;
  }

  WganGpResult out;
  const double mean_real = sum_real * inv_n;
  const double mean_fake = sum_fake * inv_n;
  out.gp = sum_gp * inv_n;
  out.disc_loss = (mean_fake - mean_real) + lambda_gp * out.gp;
  out.gen_loss = -mean_fake;

  if (disc_grad != nullptr) {
    grad_real *= -inv_n;
    grad_fake *= inv_n;
    grad_gp *= lambda_gp * inv_n;
    *disc_grad = std::move(grad_fake);
    *disc_grad += grad_real;
    *disc_grad += grad_gp;
  }
  return out;
}

}  // namespace footprint::losses
