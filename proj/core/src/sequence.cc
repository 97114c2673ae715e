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

#include "footprint/sequence.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "footprint/error.h"

namespace footprint {

void Sequence::Validate() const {
  intrinsics.Validate();
  if (frames.empty()) {
    throw Error(ErrorCode::kInvariantViolation, "sequence has no frames");
  }
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (!std::isfinite(frames[i].timestamp)) {
      throw Error(ErrorCode::kInvariantViolation,
                  "frame " + std::to_string(frames[i].frame_index) +
                      " has a non-finite timestamp");
    }
    if (i == 0) continue;
    if (frames[i].frame_index == frames[i - 1].frame_index) {
      throw Error(ErrorCode::kDuplicateFrameIndex,
                  "frame_index " + std::to_string(frames[i].frame_index));
    }
    if (frames[i].frame_index < frames[i - 1].frame_index) {
      throw Error(ErrorCode::kInvariantViolation,
                  "frames are not ordered by frame_index");
    }
    if (!(frames[i].timestamp > frames[i - 1].timestamp)) {
      throw Error(ErrorCode::kInvariantViolation,
                  "timestamps must increase strictly with frame_index (frame " +
                      std::to_string(frames[i].frame_index) + ")");
    }
  }
  for (const PersonObservation& obs : observations) {
    if (!FramePosition(obs.frame_index)) {
      throw Error(ErrorCode::kInvariantViolation,
                  "observation '" + obs.object_id + "' references missing frame " +
                      std::to_string(obs.frame_index));
    }
    if (!obs.foot_point.allFinite()) {
      throw Error(ErrorCode::kInvariantViolation,
                  "observation '" + obs.object_id + "' has a non-finite foot_point");
    }
  }
}

std::optional<std::size_t> Sequence::FramePosition(std::int64_t frame_index) const {
  const auto it = std::lower_bound(
      frames.begin(), frames.end(), frame_index,
      [](const Frame& f, std::int64_t idx) { return f.frame_index < idx; });
  if (it == frames.end() || it->frame_index != frame_index) return std::nullopt;
  return static_cast<std::size_t>(it - frames.begin());
}

}  // namespace footprint
