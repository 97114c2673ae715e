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

#ifndef FOOTPRINT_SEQUENCE_H_
#define FOOTPRINT_SEQUENCE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "footprint/geometry.h"

namespace footprint {

// Ground-contact point of one annotated person, in the camera coordinates of
// the frame that annotated it (x right, y down, z forward; meters).
struct PersonObservation {
  std::string object_id;
  std::int64_t frame_index = 0;
  geometry::Point3 foot_point = geometry::Point3::Zero();

  bool operator==(const PersonObservation& other) const {
    return object_id == other.object_id && frame_index == other.frame_index &&
           foot_point == other.foot_point;
  }
};

struct Frame {
  std::int64_t frame_index = 0;
  double timestamp = 0.0;  // seconds
  geometry::RigidTransform pose;  // camera-to-world

  bool operator==(const Frame&) const = default;
};

// One capture episode. Labels are only ever propagated within a sequence.
struct Sequence {
  std::string sequence_id;
  geometry::CameraIntrinsics intrinsics;
  std::vector<Frame> frames;  // strictly increasing frame_index and timestamp
  std::vector<PersonObservation> observations;

  // Throws InvariantViolation / DuplicateFrameIndex / InvalidArgument when any
  // Sequence, Frame or PersonObservation invariant is broken.
  void Validate() const;

  // Position of `frame_index` in `frames`, or nullopt.
  std::optional<std::size_t> FramePosition(std::int64_t frame_index) const;

  bool operator==(const Sequence&) const = default;
};

}  // namespace footprint

#endif  // FOOTPRINT_SEQUENCE_H_
