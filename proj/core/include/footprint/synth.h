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

#ifndef FOOTPRINT_SYNTH_H_
#define FOOTPRINT_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "footprint/geometry.h"
#include "footprint/grid.h"
#include "footprint/propagation.h"
#include "footprint/sequence.h"

namespace footprint::synth {

// Axis-aligned walkable rectangle on the world ground plane z = 0 (meters).
struct Rect {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  bool Contains(double x, double y) const {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
  }
};

// Vehicle-mounted camera moving at constant velocity over the ground plane.
// World is z-up; the camera looks along heading `yaw` (radians from +x)
// tilted down by `pitch`. Camera axes are x right, y down, z forward.
struct CameraPath {
  double start_x = 0.0;
  double start_y = 0.0;
  double velocity_x = 0.0;  // m/s
  double velocity_y = 0.0;
  double height = 1.8;  // m
  double yaw = 0.0;
  double yaw_rate = 0.0;  // rad/s
  double pitch = 0.05;

  geometry::RigidTransform PoseAt(double t) const;  // camera-to-world
};

struct SceneSpec {
  std::string sequence_id = "synth";
  std::vector<Rect> walkable_rects;
  int n_pedestrians = 0;
  int n_frames = 2;
  double frame_dt = 0.5;  // s
  CameraPath camera_path;
  geometry::CameraIntrinsics intrinsics;
  int label_downsample = 4;  // mask grid = label grid at this downsample
  std::uint64_t seed = 0;

  // Throws InvalidArgument on invariant violations (positive rectangle areas,
  // n_frames >= 2, frame_dt > 0, valid intrinsics).
  void Validate() const;

  // One 16 x 12 m plaza, 20 frames 2 s apart, 5 pedestrians, 640x480.
  static SceneSpec Default();
};

inline constexpr double kMinSpeed = 0.5;    // m/s
inline constexpr double kMaxSpeed = 2.0;    // m/s
inline constexpr double kMinRectSide = 0.5; // m, narrower strips host no walks
inline constexpr double kMaskSampleStep = 0.05;  // m

struct Scene {
  Sequence sequence;
  std::vector<BinaryMap> masks;  // one per frame, label-grid shaped
};

// Seeded random-waypoint walks inside the rectangles at 0.5-2.0 m/s.
// Observations are recorded for every frame in which a pedestrian projects
// inside the image. Masks rasterize a 0.05 m sampling of every rectangle.
// Throws InfeasibleSpec when pedestrians are requested but no rectangle is at
// least kMinRectSide wide in both directions.
Scene GenerateScene(const SceneSpec& spec);

// JSON document with the SceneSpec field names; omitted fields keep the
// values of SceneSpec::Default().
SceneSpec ParseSceneSpec(const std::string& json_text);
std::string SceneSpecToJson(const SceneSpec& spec);

struct CoverageViolation {
  std::size_t observation_index = 0;
  std::string object_id;
  std::int64_t frame_index = 0;
  std::vector<std::int64_t> ref_frames;  // where the splat missed the mask
};

struct CoverageReport {
  std::int64_t checked = 0;  // (ref frame, observation) pairs landing on grid
  std::vector<CoverageViolation> violations;
};

// For every reference frame, every footprint center that lands on the grid
// must fall inside that frame's mask dilated by the support radius.
// Violations are reported per observation. Throws ShapeMismatch when masks do
// not align with the frames or the label grid.
CoverageReport CoverageCheck(const Sequence& seq, const std::vector<BinaryMap>& masks,
                             const propagation::PropagationParams& params);

}  // namespace footprint::synth

#endif  // FOOTPRINT_SYNTH_H_
