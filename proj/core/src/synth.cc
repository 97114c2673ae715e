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

#include "footprint/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include <Eigen/Geometry>

#include "footprint/error.h"
#include "footprint/random.h"
#include "json.hpp"

namespace footprint::synth {
namespace {

using geometry::Point3;
using geometry::RigidTransform;
using nlohmann::json;

struct Walker {
  std::size_t rect = 0;
  double x = 0.0;
  double y = 0.0;
  double target_x = 0.0;
  double target_y = 0.0;
  double speed = 1.0;
};

void PickWaypoint(const Rect& rect, CounterRng& rng, Walker& w) {
  w.target_x = rng.Uniform(rect.x_min, rect.x_max);
  w.target_y = rng.Uniform(rect.y_min, rect.y_max);
  w.speed = rng.Uniform(kMinSpeed, kMaxSpeed);
}

// Constant-speed motion along straight segments; the rectangle is convex so
// every intermediate point stays inside it.
void Advance(const std::vector<Rect>& rects, CounterRng& rng, Walker& w, double dt) {
  double remaining = dt;
  for (int guard = 0; remaining > 0.0 && guard < 1000; ++guard) {
    const double dx = w.target_x - w.x;
    const double dy = w.target_y - w.y;
    const double dist = std::hypot(dx, dy);
    const double reach = w.speed * remaining;
    if (reach < dist) {
      w.x += dx / dist * reach;
      w.y += dy / dist * reach;
      return;
    }
    w.x = w.target_x;
    w.y = w.target_y;
    remaining -= dist / w.speed;
    PickWaypoint(rects[w.rect], rng, w);
  }
}

bool Feasible(const Rect& r) {
  return r.x_max - r.x_min >= kMinRectSide && r.y_max - r.y_min >= kMinRectSide;
}

template <typename T>
void Read(const json& doc, const char* key, T& out) {
  const auto it = doc.find(key);
  if (it == doc.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord, std::string("scene spec field '") + key + "': " + e.what());
  }
}

}  // namespace

RigidTransform CameraPath::PoseAt(double t) const {
  const double heading = yaw + yaw_rate * t;
  const Eigen::Vector3d right(std::sin(heading), -std::cos(heading), 0.0);
  const Eigen::Vector3d forward(std::cos(heading) * std::cos(pitch),
                                std::sin(heading) * std::cos(pitch), -std::sin(pitch));
  const Eigen::Vector3d down = forward.cross(right);
  Eigen::Matrix3d rotation;
  rotation.col(0) = right;
  rotation.col(1) = down;
  rotation.col(2) = forward;
  return RigidTransform::FromRotationTranslation(
      rotation,
      Eigen::Vector3d(start_x + velocity_x * t, start_y + velocity_y * t, height));
}

void SceneSpec::Validate() const {
  intrinsics.Validate();
  for (const Rect& r : walkable_rects) {
    if (!(r.x_max > r.x_min && r.y_max > r.y_min) || !std::isfinite(r.x_min) ||
        !std::isfinite(r.x_max) || !std::isfinite(r.y_min) || !std::isfinite(r.y_max)) {
      throw Error(ErrorCode::kInvalidArgument, "walkable rectangles need positive area");
    }
  }
  if (n_pedestrians < 0) throw Error(ErrorCode::kInvalidArgument, "n_pedestrians must be >= 0");
  if (n_frames < 2) throw Error(ErrorCode::kInvalidArgument, "n_frames must be >= 2");
  if (!(frame_dt > 0.0) || !std::isfinite(frame_dt)) {
    throw Error(ErrorCode::kInvalidArgument, "frame_dt must be positive");
  }
  if (label_downsample < 1) throw Error(ErrorCode::kInvalidArgument, "label_downsample must be >= 1");
}

SceneSpec SceneSpec::Default() {
  SceneSpec spec;
  spec.sequence_id = "synth";
  // A pedestrian plaza ahead of a slowly advancing camera. Frames are 2 s
  // apart so each walker leaves a trail several footprints long.
  spec.walkable_rects = {Rect{8.0, -6.0, 24.0, 6.0}};
  spec.n_pedestrians = 5;
  spec.n_frames = 20;
  spec.frame_dt = 2.0;
  spec.camera_path.velocity_x = 0.5;
  spec.camera_path.pitch = 0.2;
  spec.intrinsics = geometry::CameraIntrinsics{500.0, 500.0, 320.0, 240.0, 640, 480};
  spec.label_downsample = 4;
  spec.seed = 7;
  return spec;
}

Scene GenerateScene(const SceneSpec& spec) {
  spec.Validate();
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < spec.walkable_rects.size(); ++i) {
    if (Feasible(spec.walkable_rects[i])) usable.push_back(i);
  }
  if (spec.n_pedestrians > 0 && usable.empty()) {
    throw Error(ErrorCode::kInfeasibleSpec,
                "no walkable rectangle is at least 0.5 m wide in both directions");
  }

  CounterRng rng(spec.seed);
  std::vector<Walker> walkers(static_cast<std::size_t>(spec.n_pedestrians));
  for (Walker& w : walkers) {
    w.rect = usable[static_cast<std::size_t>(rng.Below(usable.size()))];
    const Rect& r = spec.walkable_rects[w.rect];
    w.x = rng.Uniform(r.x_min, r.x_max);
    w.y = rng.Uniform(r.y_min, r.y_max);
    PickWaypoint(r, rng, w);
  }

  Scene scene;
  Sequence& seq = scene.sequence;
  seq.sequence_id = spec.sequence_id;
  seq.intrinsics = spec.intrinsics;
  const auto& k = spec.intrinsics;
  const int s = spec.label_downsample;
  const propagation::GridShape shape = propagation::LabelGridShape(k, s);

  for (int f = 0; f < spec.n_frames; ++f) {
    const double t = f * spec.frame_dt;
    if (f > 0) {
      for (Walker& w : walkers) Advance(spec.walkable_rects, rng, w, spec.frame_dt);
    }
    const RigidTransform pose = spec.camera_path.PoseAt(t);
    seq.frames.push_back(Frame{f, t, pose});
    const RigidTransform world_to_camera = geometry::Invert(pose);

    for (std::size_t i = 0; i < walkers.size(); ++i) {
      const Point3 cam = world_to_camera.Apply(Point3(walkers[i].x, walkers[i].y, 0.0));
      const auto px = geometry::Project(k, cam);
      if (!px || px->u < 0 || px->v < 0 || px->u >= k.width || px->v >= k.height) continue;
      char id[32];
      std::snprintf(id, sizeof(id), "ped_%03zu", i);
      seq.observations.push_back(PersonObservation{id, f, cam});
    }

    BinaryMap mask(shape.rows, shape.cols, 0);
    for (const Rect& r : spec.walkable_rects) {
      const int nx = static_cast<int>(std::floor((r.x_max - r.x_min) / kMaskSampleStep));
      const int ny = static_cast<int>(std::floor((r.y_max - r.y_min) / kMaskSampleStep));
      for (int ix = 0; ix <= nx; ++ix) {
        const double x = std::min(r.x_max, r.x_min + ix * kMaskSampleStep);
        for (int iy = 0; iy <= ny; ++iy) {
          const double y = std::min(r.y_max, r.y_min + iy * kMaskSampleStep);
          const auto px = geometry::Project(k, world_to_camera.Apply(Point3(x, y, 0.0)));
          if (!px || px->u < 0 || px->v < 0 || px->u >= k.width || px->v >= k.height) continue;
          mask(static_cast<int>(px->v / s), static_cast<int>(px->u / s)) = 1;
        }
      }
    }
    scene.masks.push_back(std::move(mask));
  }
  seq.Validate();
  return scene;
}

SceneSpec ParseSceneSpec(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformedRecord, std::string("scene spec: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kMalformedRecord, "scene spec must be an object");
  SceneSpec spec = SceneSpec::Default();
  Read(doc, "sequence_id", spec.sequence_id);
  Read(doc, "n_pedestrians", spec.n_pedestrians);
  Read(doc, "n_frames", spec.n_frames);
  Read(doc, "frame_dt", spec.frame_dt);
  Read(doc, "label_downsample", spec.label_downsample);
  Read(doc, "seed", spec.seed);
  if (const auto it = doc.find("walkable_rects"); it != doc.end()) {
    if (!it->is_array()) throw Error(ErrorCode::kMalformedRecord, "walkable_rects must be an array");
    spec.walkable_rects.clear();
    for (const json& r : *it) {
      if (!r.is_array() || r.size() != 4) {
        throw Error(ErrorCode::kMalformedRecord,
                    "each walkable rect is [x_min, y_min, x_max, y_max]");
      }
      spec.walkable_rects.push_back(
          Rect{r[0].get<double>(), r[1].get<double>(), r[2].get<double>(), r[3].get<double>()});
    }
  }
  if (const auto it = doc.find("camera_path"); it != doc.end()) {
    CameraPath& c = spec.camera_path;
    Read(*it, "start_x", c.start_x);
    Read(*it, "start_y", c.start_y);
    Read(*it, "velocity_x", c.velocity_x);
    Read(*it, "velocity_y", c.velocity_y);
    Read(*it, "height", c.height);
    Read(*it, "yaw", c.yaw);
    Read(*it, "yaw_rate", c.yaw_rate);
    Read(*it, "pitch", c.pitch);
  }
  if (const auto it = doc.find("intrinsics"); it != doc.end()) {
    geometry::CameraIntrinsics& k = spec.intrinsics;
    Read(*it, "fx", k.fx);
    Read(*it, "fy", k.fy);
    Read(*it, "cx", k.cx);
    Read(*it, "cy", k.cy);
    Read(*it, "width", k.width);
    Read(*it, "height", k.height);
  }
  spec.Validate();
  return spec;
}

std::string SceneSpecToJson(const SceneSpec& spec) {
  json doc;
  doc["sequence_id"] = spec.sequence_id;
  doc["n_pedestrians"] = spec.n_pedestrians;
  doc["n_frames"] = spec.n_frames;
  doc["frame_dt"] = spec.frame_dt;
  doc["label_downsample"] = spec.label_downsample;
  doc["seed"] = spec.seed;
  doc["walkable_rects"] = json::array();
  for (const Rect& r : spec.walkable_rects) {
    doc["walkable_rects"].push_back({r.x_min, r.y_min, r.x_max, r.y_max});
  }
  const CameraPath& c = spec.camera_path;
  doc["camera_path"] = {{"start_x", c.start_x},       {"start_y", c.start_y},
                        {"velocity_x", c.velocity_x}, {"velocity_y", c.velocity_y},
                        {"height", c.height},         {"yaw", c.yaw},
                        {"yaw_rate", c.yaw_rate},     {"pitch", c.pitch}};
  const auto& k = spec.intrinsics;
  doc["intrinsics"] = {{"fx", k.fx}, {"fy", k.fy},       {"cx", k.cx},
                       {"cy", k.cy}, {"width", k.width}, {"height", k.height}};
  return doc.dump(2) + "\n";
}

CoverageReport CoverageCheck(const Sequence& seq, const std::vector<BinaryMap>& masks,
                             const propagation::PropagationParams& params) {
  params.Validate();
  if (masks.size() != seq.frames.size()) {
    throw Error(ErrorCode::kShapeMismatch, "need exactly one mask per frame");
  }
  const propagation::GridShape shape = propagation::LabelGridShape(seq.intrinsics, params.downsample);
  for (const BinaryMap& m : masks) {
    if (m.rows() != shape.rows || m.cols() != shape.cols) {
      throw Error(ErrorCode::kShapeMismatch, "mask does not match the label grid");
    }
  }
  const double radius = params.SupportRadius();
  const int reach = std::isinf(radius) ? std::max(shape.rows, shape.cols)
                                       : static_cast<int>(std::floor(radius));
  std::vector<std::pair<int, int>> offsets;
  for (int dr = -reach; dr <= reach; ++dr) {
    for (int dc = -reach; dc <= reach; ++dc) {
      if (static_cast<double>(dr * dr + dc * dc) <= radius * radius) offsets.emplace_back(dr, dc);
    }
  }

  CoverageReport report;
  std::map<std::size_t, CoverageViolation> by_observation;
  const double inv_s = 1.0 / params.downsample;
  for (std::size_t ref = 0; ref < seq.frames.size(); ++ref) {
    const BinaryMap& mask = masks[ref];
    BinaryMap dilated(shape.rows, shape.cols, 0);
    for (int r = 0; r < shape.rows; ++r) {
      for (int c = 0; c < shape.cols; ++c) {
        if (mask(r, c) == 0) continue;
        for (const auto& [dr, dc] : offsets) {
          const int rr = r + dr;
          const int cc = c + dc;
          if (rr >= 0 && cc >= 0 && rr < shape.rows && cc < shape.cols) dilated(rr, cc) = 1;
        }
      }
    }
    const RigidTransform& ref_pose = seq.frames[ref].pose;
    for (std::size_t i = 0; i < seq.observations.size(); ++i) {
      const PersonObservation& obs = seq.observations[i];
      const Frame& src = seq.frames[*seq.FramePosition(obs.frame_index)];
      const auto px = geometry::Project(
          seq.intrinsics, geometry::RelativeTransform(src.pose, ref_pose).Apply(obs.foot_point),
          params.z_min);
      if (!px) continue;
      const double gx = px->u * inv_s;
      const double gy = px->v * inv_s;
      if (!(gx >= 0 && gy >= 0 && gx < shape.cols && gy < shape.rows)) continue;
      ++report.checked;
      if (dilated(static_cast<int>(gy), static_cast<int>(gx)) != 0) continue;
      CoverageViolation& v = by_observation[i];
      v.observation_index = i;
      v.object_id = obs.object_id;
      v.frame_index = obs.frame_index;
      v.ref_frames.push_back(seq.frames[ref].frame_index);
    }
  }
  for (auto& [i, v] : by_observation) report.violations.push_back(std::move(v));
  return report;
}

}  // namespace footprint::synth
