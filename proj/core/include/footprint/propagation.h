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

#ifndef FOOTPRINT_PROPAGATION_H_
#define FOOTPRINT_PROPAGATION_H_

#include <cstdint>
#include <limits>
#include <optional>

#include "footprint/geometry.h"
#include "footprint/grid.h"
#include "footprint/sequence.h"

namespace footprint::propagation {

inline constexpr double kUnboundedSupport = std::numeric_limits<double>::infinity();

struct PropagationParams {
  double sigma = 2.0;  // Gaussian std-dev in label-grid cells
  int downsample = 4;  // image pixels per label-grid cell
  // Kernel truncation radius in cells; unset means 3 * sigma.
  // kUnboundedSupport disables truncation and the off-grid skip.
  std::optional<double> support_radius;
  double z_min = geometry::kDefaultZMin;

  double SupportRadius() const { return support_radius.value_or(3.0 * sigma); }

  // Throws InvalidArgument unless sigma > 0, downsample >= 1,
  // support radius >= sigma and z_min is finite.
  void Validate() const;
};

// Label grid is ceil(height / s) x ceil(width / s). Cell (r, c) is centered at
// image point ((c + 0.5) s, (r + 0.5) s).
struct GridShape {
  int rows = 0;
  int cols = 0;
};
GridShape LabelGridShape(const geometry::CameraIntrinsics& k, int downsample);

struct PropagationDiagnostics {
  std::int64_t splatted = 0;
  std::int64_t behind_camera = 0;
  std::int64_t off_grid = 0;
  std::int64_t stationary = 0;  // direction maps only

  bool operator==(const PropagationDiagnostics&) const = default;
};

// L_t: sum over every frame t_i and object o of the unnormalized Gaussian
// exp(-|x_{o,t_i} / s - center|^2 / (2 sigma^2)), truncated to zero beyond the
// support radius. x_{o,t_i} is the foot point of o annotated in t_i, moved into
// frame t's camera by the relative pose and projected with K.
struct FootprintMap {
  Grid<double> grid;
  PropagationParams params;
  std::int64_t ref_frame = 0;
  PropagationDiagnostics diagnostics;
};

// Accumulates all observations of `seq` into reference frame `ref_frame`.
// When `only_source` is set, the outer sum is restricted to that one
// annotating frame (single-frame accumulation).
// Throws UnknownFrame if ref_frame or only_source is not in the sequence.
FootprintMap PropagateFootprints(const Sequence& seq, std::int64_t ref_frame,
                                 const PropagationParams& params,
                                 std::optional<std::int64_t> only_source = std::nullopt);

// Cell = 1 iff value > 0.
BinaryMap Binarize(const Grid<double>& map);
inline BinaryMap Binarize(const FootprintMap& map) { return Binarize(map.grid); }

inline constexpr double kStationaryThreshold = 0.01;  // meters

// Unit 3D walking direction, or nullopt when the displacement is below
// kStationaryThreshold.
std::optional<Eigen::Vector3d> WalkingDirection(const geometry::Point3& p_now,
                                                const geometry::Point3& p_next);

struct DirectionResult {
  DirectionMap map;
  std::int64_t ref_frame = 0;
  PropagationDiagnostics diagnostics;
};

inline constexpr double kDirectionCancelNorm = 1e-6;

// For every observation with a successor (same object_id, next annotated
// frame) the image-plane direction between the two projected foot points is
// splatted with the same Gaussian weights as PropagateFootprints. Each cell
// holds the normalized weighted sum, or nothing when that sum's norm is below
// kDirectionCancelNorm.
DirectionResult PropagateDirections(const Sequence& seq, std::int64_t ref_frame,
                                    const PropagationParams& params);

}  // namespace footprint::propagation

#endif  // FOOTPRINT_PROPAGATION_H_
