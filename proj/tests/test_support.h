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

#ifndef FOOTPRINT_TESTS_TEST_SUPPORT_H_
#define FOOTPRINT_TESTS_TEST_SUPPORT_H_

// Shared generators and independent oracles. Nothing here calls into the
// propagation or geometry code paths it is used to check.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Geometry>

#include "footprint/geometry.h"
#include "footprint/grid.h"
#include "footprint/sequence.h"

namespace footprint::testing {

inline std::filesystem::path FixturePath(const std::string& name) {
  return std::filesystem::path(FOOTPRINT_FIXTURE_DIR) / name;
}

inline std::filesystem::path TempDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("footprint_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline Eigen::Matrix3d RandomRotation(std::mt19937_64& rng, double max_angle = M_PI) {
  std::normal_distribution<double> normal;
  Eigen::Vector3d axis(normal(rng), normal(rng), normal(rng));
  axis.normalize();
  std::uniform_real_distribution<double> angle(-max_angle, max_angle);
  return Eigen::AngleAxisd(angle(rng), axis).toRotationMatrix();
}

inline geometry::RigidTransform RandomPose(std::mt19937_64& rng, double max_angle = M_PI,
                                           double max_offset = 10.0) {
  std::uniform_real_distribution<double> offset(-max_offset, max_offset);
  return geometry::RigidTransform::FromRotationTranslation(
      RandomRotation(rng, max_angle), Eigen::Vector3d(offset(rng), offset(rng), offset(rng)));
}

// Camera-to-world pose of a forward-looking camera (x right, y down, z
// forward) at `position` with heading `yaw` around world z-up.
inline geometry::RigidTransform ForwardCamera(const Eigen::Vector3d& position, double yaw,
                                              double pitch = 0.0) {
  const Eigen::Vector3d right(std::sin(yaw), -std::cos(yaw), 0.0);
  const Eigen::Vector3d forward(std::cos(yaw) * std::cos(pitch), std::sin(yaw) * std::cos(pitch),
                                -std::sin(pitch));
  Eigen::Matrix3d r;
  r.col(0) = right;
  r.col(1) = forward.cross(right);
  r.col(2) = forward;
  return geometry::RigidTransform::FromRotationTranslation(r, position);
}

// Random driving-like sequence: a camera moving forward with small heading
// changes and pedestrians walking on the ground plane in front of it. Some
// observations end up behind or beside later cameras.
inline Sequence RandomSequence(std::mt19937_64& rng, int n_frames, int n_objects, int width,
                               int height, double focal) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Sequence seq;
  seq.sequence_id = "random";
  seq.intrinsics = geometry::CameraIntrinsics{focal, focal, width / 2.0 + u01(rng),
                                              height / 2.0 - u01(rng), width, height};
  std::vector<Eigen::Vector3d> pos(static_cast<std::size_t>(n_objects));
  std::vector<Eigen::Vector3d> vel(static_cast<std::size_t>(n_objects));
  for (int o = 0; o < n_objects; ++o) {
    pos[o] = Eigen::Vector3d(4.0 + 20.0 * u01(rng), -6.0 + 12.0 * u01(rng), 0.0);
    vel[o] = Eigen::Vector3d(-1.5 + 3.0 * u01(rng), -1.5 + 3.0 * u01(rng), 0.0);
  }
  double yaw = -0.2 + 0.4 * u01(rng);
  Eigen::Vector3d cam(0.0, 0.0, 1.5 + u01(rng));
  for (int f = 0; f < n_frames; ++f) {
    const auto pose = ForwardCamera(cam, yaw, 0.05 + 0.1 * u01(rng));
    seq.frames.push_back(Frame{f, 0.1 * f, pose});
    const auto world_to_cam = geometry::Invert(pose);
    for (int o = 0; o < n_objects; ++o) {
      if (u01(rng) < 0.8) {
        seq.observations.push_back(
            PersonObservation{"obj" + std::to_string(o), f, world_to_cam.Apply(pos[o])});
      }
      pos[o] += 0.5 * vel[o];
    }
    cam += Eigen::Vector3d(std::cos(yaw), std::sin(yaw), 0.0) * (1.0 + 2.0 * u01(rng));
    yaw += -0.1 + 0.2 * u01(rng);
  }
  return seq;
}

// The footprint sum evaluated literally: every cell against every (frame, object) pair,
// no truncation. Points are carried camera(src) -> world -> camera(ref) with
// plain loops rather than a composed relative transform.
inline Grid<double> BruteForceFootprints(const Sequence& seq, std::int64_t ref_frame, double sigma,
                                         int downsample, double z_min = 0.1,
                                         std::optional<std::int64_t> only_source = std::nullopt) {
  const auto& k = seq.intrinsics;
  const int rows = (k.height + downsample - 1) / downsample;
  const int cols = (k.width + downsample - 1) / downsample;
  Grid<double> out(rows, cols, 0.0);
  const Frame* ref = nullptr;
  for (const Frame& f : seq.frames) {
    if (f.frame_index == ref_frame) ref = &f;
  }
  const Eigen::Matrix3d& rr = ref->pose.rotation();
  const Eigen::Vector3d& rt = ref->pose.translation();
  for (const PersonObservation& obs : seq.observations) {
    if (only_source && obs.frame_index != *only_source) continue;
    const Frame* src = nullptr;
    for (const Frame& f : seq.frames) {
      if (f.frame_index == obs.frame_index) src = &f;
    }
    double world[3];
    for (int i = 0; i < 3; ++i) {
      world[i] = src->pose.translation()[i];
      for (int j = 0; j < 3; ++j) world[i] += src->pose.rotation()(i, j) * obs.foot_point[j];
    }
    double cam[3];
    for (int i = 0; i < 3; ++i) {
      cam[i] = 0.0;
      for (int j = 0; j < 3; ++j) cam[i] += rr(j, i) * (world[j] - rt[j]);
    }
    if (!(cam[2] > z_min)) continue;
    const double gx = (k.fx * cam[0] / cam[2] + k.cx) / downsample;
    const double gy = (k.fy * cam[1] / cam[2] + k.cy) / downsample;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const double dx = gx - (c + 0.5);
        const double dy = gy - (r + 0.5);
        out(r, c) += std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      }
    }
  }
  return out;
}

// Direction maps evaluated cell by cell: each observation with a successor
// contributes its image-plane unit direction with the untruncated-kernel
// weight where the cell lies within `radius` of the projected foot point.
// Callers supply sequences without stationary or behind-camera steps.
inline Grid<std::optional<Direction2>> BruteForceDirections(const Sequence& seq,
                                                            std::int64_t ref_frame, double sigma,
                                                            int downsample, double radius) {
  const auto& k = seq.intrinsics;
  const int rows = (k.height + downsample - 1) / downsample;
  const int cols = (k.width + downsample - 1) / downsample;
  const Frame* ref = nullptr;
  for (const Frame& f : seq.frames) {
    if (f.frame_index == ref_frame) ref = &f;
  }
  auto pose_of = [&](std::int64_t index) -> const Frame& {
    for (const Frame& f : seq.frames) {
      if (f.frame_index == index) return f;
    }
    throw std::logic_error("missing frame");
  };
  // Reference-camera pixel of an observation, with plain loops.
  auto pixel_of = [&](const PersonObservation& obs, double* u, double* v) {
    const Frame& src = pose_of(obs.frame_index);
    double world[3];
    double cam[3];
    for (int i = 0; i < 3; ++i) {
      world[i] = src.pose.translation()[i];
      for (int j = 0; j < 3; ++j) world[i] += src.pose.rotation()(i, j) * obs.foot_point[j];
    }
    for (int i = 0; i < 3; ++i) {
      cam[i] = 0.0;
      for (int j = 0; j < 3; ++j) {
        cam[i] += ref->pose.rotation()(j, i) * (world[j] - ref->pose.translation()[j]);
      }
    }
    *u = k.fx * cam[0] / cam[2] + k.cx;
    *v = k.fy * cam[1] / cam[2] + k.cy;
  };
  Grid<double> sx(rows, cols, 0.0);
  Grid<double> sy(rows, cols, 0.0);
  for (const PersonObservation& now : seq.observations) {
    const PersonObservation* next = nullptr;
    for (const PersonObservation& cand : seq.observations) {
      if (cand.object_id != now.object_id || cand.frame_index <= now.frame_index) continue;
      if (next == nullptr || cand.frame_index < next->frame_index) next = &cand;
    }
    if (next == nullptr) continue;
    double u0, v0, u1, v1;
    pixel_of(now, &u0, &v0);
    pixel_of(*next, &u1, &v1);
    const double len = std::sqrt((u1 - u0) * (u1 - u0) + (v1 - v0) * (v1 - v0));
    const double gx = u0 / downsample;
    const double gy = v0 / downsample;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const double d2 = (gx - (c + 0.5)) * (gx - (c + 0.5)) + (gy - (r + 0.5)) * (gy - (r + 0.5));
        if (d2 > radius * radius) continue;
        const double w = std::exp(-d2 / (2.0 * sigma * sigma));
        sx(r, c) += w * (u1 - u0) / len;
        sy(r, c) += w * (v1 - v0) / len;
      }
    }
  }
  Grid<std::optional<Direction2>> out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double n = std::sqrt(sx(r, c) * sx(r, c) + sy(r, c) * sy(r, c));
      if (n >= 1e-6) out(r, c) = Direction2{sx(r, c) / n, sy(r, c) / n};
    }
  }
  return out;
}

// Rank-free oracle: the precision at a positive cell counts every cell that a
// descending-score, row-major-tiebreak ordering would place at or before it.
inline double BruteForceAp(const ScoreMap& scores, const BinaryMap& gt) {
  double sum = 0.0;
  int positives = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt.at_flat(i) == 0) continue;
    ++positives;
    int ahead = 0;
    int ahead_pos = 0;
    for (std::size_t j = 0; j < gt.size(); ++j) {
      const bool before = scores.at_flat(j) > scores.at_flat(i) ||
                          (scores.at_flat(j) == scores.at_flat(i) && j <= i);
      if (before) {
        ++ahead;
        ahead_pos += gt.at_flat(j);
      }
    }
    sum += static_cast<double>(ahead_pos) / ahead;
  }
  return sum / positives;
}

inline double MaxAbsDiff(const Grid<double>& a, const Grid<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.at_flat(i) - b.at_flat(i)));
  return m;
}

inline std::size_t CountNonZero(const Grid<double>& g) {
  std::size_t n = 0;
  for (const double v : g.values()) n += v > 0.0 ? 1 : 0;
  return n;
}

}  // namespace footprint::testing

#endif  // FOOTPRINT_TESTS_TEST_SUPPORT_H_
