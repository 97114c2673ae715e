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

#include "footprint/propagation.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "footprint/error.h"

namespace footprint::propagation {
namespace {

using geometry::Pixel;
using geometry::RigidTransform;

std::size_t RequireFrame(const Sequence& seq, std::int64_t frame_index) {
  const auto pos = seq.FramePosition(frame_index);
  if (!pos) {
    throw Error(ErrorCode::kUnknownFrame,
                "frame " + std::to_string(frame_index) + " is not in sequence '" +
                    seq.sequence_id + "'");
  }
  return *pos;
}

// Transforms from every frame's camera into the reference camera.
std::vector<RigidTransform> ToReference(const Sequence& seq, std::size_t ref_pos) {
  std::vector<RigidTransform> out;
  out.reserve(seq.frames.size());
  const RigidTransform& ref_pose = seq.frames[ref_pos].pose;
  for (const Frame& f : seq.frames) out.push_back(geometry::RelativeTransform(f.pose, ref_pose));
  return out;
}

// Visits every cell within the support disk of a splat centered at (gx, gy)
// in cell units, calling fn(flat_index, weight). Returns false when the center
// lies farther than the support radius outside the grid.
class Splatter {
 public:
  Splatter(const PropagationParams& params, int rows, int cols)
      : inv_two_sigma_sq_(1.0 / (2.0 * params.sigma * params.sigma)),
        radius_(params.SupportRadius()),
        radius_sq_(radius_ * radius_),
        unbounded_(std::isinf(radius_)),
        rows_(rows),
        cols_(cols) {
    col_weight_.resize(static_cast<std::size_t>(cols));
    col_dx_sq_.resize(static_cast<std::size_t>(cols));
  }

  template <typename Fn>
  bool Splat(double gx, double gy, Fn&& fn) {
    if (!unbounded_ && (gx < -radius_ || gx > cols_ + radius_ || gy < -radius_ ||
                        gy > rows_ + radius_)) {
      return false;
    }
    int r0 = 0;
    int r1 = rows_ - 1;
    int c0 = 0;
    int c1 = cols_ - 1;
    if (!unbounded_) {
      r0 = static_cast<int>(std::max(0.0, std::ceil(gy - 0.5 - radius_)));
      r1 = static_cast<int>(std::min<double>(rows_ - 1, std::floor(gy - 0.5 + radius_)));
      c0 = static_cast<int>(std::max(0.0, std::ceil(gx - 0.5 - radius_)));
      c1 = static_cast<int>(std::min<double>(cols_ - 1, std::floor(gx - 0.5 + radius_)));
    }
    if (r0 > r1 || c0 > c1) return true;
    for (int c = c0; c <= c1; ++c) {
      const double dx = (c + 0.5) - gx;
      col_dx_sq_[c] = dx * dx;
      col_weight_[c] = std::exp(-col_dx_sq_[c] * inv_two_sigma_sq_);
    }
    for (int r = r0; r <= r1; ++r) {
      const double dy = (r + 0.5) - gy;
      const double dy_sq = dy * dy;
      if (dy_sq > radius_sq_) continue;
      const double row_weight = std::exp(-dy_sq * inv_two_sigma_sq_);
      const std::size_t base = static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_);
      for (int c = c0; c <= c1; ++c) {
        if (col_dx_sq_[c] + dy_sq <= radius_sq_) fn(base + c, row_weight * col_weight_[c]);
      }
    }
    return true;
  }

 private:
  double inv_two_sigma_sq_;
  double radius_;
  double radius_sq_;
  bool unbounded_;
  int rows_;
  int cols_;
  std::vector<double> col_weight_;
  std::vector<double> col_dx_sq_;
};

// Index of the next observation of the same object in a later frame, or -1.
std::vector<std::ptrdiff_t> Successors(const Sequence& seq) {
  std::unordered_map<std::string, std::vector<std::size_t>> by_object;
  for (std::size_t i = 0; i < seq.observations.size(); ++i) {
    by_object[seq.observations[i].object_id].push_back(i);
  }
  std::vector<std::ptrdiff_t> next(seq.observations.size(), -1);
  for (auto& [id, indices] : by_object) {
    std::stable_sort(indices.begin(), indices.end(), [&](std::size_t a, std::size_t b) {
      return seq.observations[a].frame_index < seq.observations[b].frame_index;
    });
    for (std::size_t k = 0; k < indices.size(); ++k) {
      const std::int64_t frame = seq.observations[indices[k]].frame_index;
      std::size_t j = k + 1;
      while (j < indices.size() && seq.observations[indices[j]].frame_index == frame) ++j;
      if (j < indices.size()) next[indices[k]] = static_cast<std::ptrdiff_t>(indices[j]);
    }
  }
  return next;
}

}  // namespace

void PropagationParams::Validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::kInvalidArgument, "sigma must be positive and finite");
  }
  if (downsample < 1) throw Error(ErrorCode::kInvalidArgument, "downsample must be >= 1");
  const double radius = SupportRadius();
  if (std::isnan(radius) || radius < sigma) {
    throw Error(ErrorCode::kInvalidArgument, "support radius must be >= sigma");
  }
  if (!std::isfinite(z_min)) throw Error(ErrorCode::kInvalidArgument, "z_min must be finite");
}

GridShape LabelGridShape(const geometry::CameraIntrinsics& k, int downsample) {
  if (downsample < 1) throw Error(ErrorCode::kInvalidArgument, "downsample must be >= 1");
  return GridShape{(k.height + downsample - 1) / downsample,
                   (k.width + downsample - 1) / downsample};
}

FootprintMap PropagateFootprints(const Sequence& seq, std::int64_t ref_frame,
                                 const PropagationParams& params,
                                 std::optional<std::int64_t> only_source) {
  params.Validate();
  const std::size_t ref_pos = RequireFrame(seq, ref_frame);
  if (only_source) RequireFrame(seq, *only_source);

  const GridShape shape = LabelGridShape(seq.intrinsics, params.downsample);
  FootprintMap out;
  out.grid = Grid<double>(shape.rows, shape.cols, 0.0);
  out.params = params;
  out.ref_frame = ref_frame;

  const std::vector<RigidTransform> to_ref = ToReference(seq, ref_pos);
  Splatter splatter(params, shape.rows, shape.cols);
  const double inv_s = 1.0 / params.downsample;
  std::span<double> cells = out.grid.values();

  for (const PersonObservation& obs : seq.observations) {
    if (only_source && obs.frame_index != *only_source) continue;
    const std::size_t pos = *seq.FramePosition(obs.frame_index);
    const auto pixel =
        geometry::Project(seq.intrinsics, to_ref[pos].Apply(obs.foot_point), params.z_min);
    if (!pixel) {
      ++out.diagnostics.behind_camera;
      continue;
    }
    const bool on_grid = splatter.Splat(pixel->u * inv_s, pixel->v * inv_s,
                                        [&](std::size_t i, double w) { cells[i] += w; });
    if (on_grid) {
      ++out.diagnostics.splatted;
    } else {
      ++out.diagnostics.off_grid;
    }
  }
  return out;
}

BinaryMap Binarize(const Grid<double>& map) {
  BinaryMap out(map.rows(), map.cols(), 0);
  for (std::size_t i = 0; i < map.size(); ++i) out.at_flat(i) = map.at_flat(i) > 0.0 ? 1 : 0;
  return out;
}

std::optional<Eigen::Vector3d> WalkingDirection(const geometry::Point3& p_now,
                                                const geometry::Point3& p_next) {
  if (!p_now.allFinite() || !p_next.allFinite()) {
    throw Error(ErrorCode::kNonFiniteValue, "walking endpoints must be finite");
  }
  const Eigen::Vector3d delta = p_next - p_now;
  const double norm = delta.norm();
  if (norm < kStationaryThreshold) return std::nullopt;
  return delta / norm;
}

DirectionResult PropagateDirections(const Sequence& seq, std::int64_t ref_frame,
                                    const PropagationParams& params) {
  params.Validate();
  const std::size_t ref_pos = RequireFrame(seq, ref_frame);
  const GridShape shape = LabelGridShape(seq.intrinsics, params.downsample);
  const std::vector<RigidTransform> to_ref = ToReference(seq, ref_pos);
  const std::vector<std::ptrdiff_t> successor = Successors(seq);

  DirectionResult out;
  out.ref_frame = ref_frame;
  out.map = DirectionMap(shape.rows, shape.cols);
  Grid<double> sum_du(shape.rows, shape.cols, 0.0);
  Grid<double> sum_dv(shape.rows, shape.cols, 0.0);
  Splatter splatter(params, shape.rows, shape.cols);
  const double inv_s = 1.0 / params.downsample;

  for (std::size_t i = 0; i < seq.observations.size(); ++i) {
    if (successor[i] < 0) continue;
    const PersonObservation& now = seq.observations[i];
    const PersonObservation& next = seq.observations[static_cast<std::size_t>(successor[i])];
    const std::size_t now_pos = *seq.FramePosition(now.frame_index);
    const std::size_t next_pos = *seq.FramePosition(next.frame_index);

    const auto world_dir = WalkingDirection(seq.frames[now_pos].pose.Apply(now.foot_point),
                                            seq.frames[next_pos].pose.Apply(next.foot_point));
    if (!world_dir) {
      ++out.diagnostics.stationary;
      continue;
    }
    const auto p_now =
        geometry::Project(seq.intrinsics, to_ref[now_pos].Apply(now.foot_point), params.z_min);
    const auto p_next = geometry::Project(seq.intrinsics,
                                          to_ref[next_pos].Apply(next.foot_point), params.z_min);
    if (!p_now || !p_next) {
      ++out.diagnostics.behind_camera;
      continue;
    }
    const double du = p_next->u - p_now->u;
    const double dv = p_next->v - p_now->v;
    const double norm = std::hypot(du, dv);
    if (!(norm > 0.0)) {
      // Motion along the viewing ray has no image-plane direction.
      ++out.diagnostics.stationary;
      continue;
    }
    const double ux = du / norm;
    const double uy = dv / norm;
    const bool on_grid = splatter.Splat(p_now->u * inv_s, p_now->v * inv_s,
                                        [&](std::size_t cell, double w) {
                                          sum_du.at_flat(cell) += w * ux;
                                          sum_dv.at_flat(cell) += w * uy;
                                        });
    if (on_grid) {
      ++out.diagnostics.splatted;
    } else {
      ++out.diagnostics.off_grid;
    }
  }

  for (std::size_t cell = 0; cell < out.map.size(); ++cell) {
    const double x = sum_du.at_flat(cell);
    const double y = sum_dv.at_flat(cell);
    const double norm = std::hypot(x, y);
    if (norm >= kDirectionCancelNorm) out.map.at_flat(cell) = Direction2{x / norm, y / norm};
  }
  return out;
}

}  // namespace footprint::propagation
