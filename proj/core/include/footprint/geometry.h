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

#ifndef FOOTPRINT_GEOMETRY_H_
#define FOOTPRINT_GEOMETRY_H_

#include <optional>

#include <Eigen/Core>

namespace footprint::geometry {

using Point3 = Eigen::Vector3d;

// Pinhole camera. Image coordinates are continuous pixels with the origin at
// the top-left corner of the top-left pixel.
struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  // Throws InvalidArgument unless fx, fy, width, height are positive and
  // everything is finite.
  void Validate() const;

  bool operator==(const CameraIntrinsics&) const = default;
};

struct Pixel {
  double u = 0.0;
  double v = 0.0;
  bool operator==(const Pixel&) const = default;
};

inline constexpr double kOrthonormalTolerance = 1e-9;
// Drift above kOrthonormalTolerance but below this is repaired by projecting
// back onto SO(3); anything larger is an error.
inline constexpr double kRepairableDrift = 1e-6;
inline constexpr double kDefaultZMin = 0.1;

// Proper rigid motion X -> R X + t. Construction validates the rotation, so
// every instance satisfies R^T R = I and det R = 1 within 1e-9.
class RigidTransform {
 public:
  // Identity.
  RigidTransform();

  // Throws InvalidTransform when the rotation is not orthonormal, has
  // negative determinant or either argument is non-finite.
  static RigidTransform FromRotationTranslation(const Eigen::Matrix3d& rotation,
                                                const Eigen::Vector3d& translation);

  static RigidTransform Translation(double x, double y, double z);
  static RigidTransform RotationX(double radians);
  static RigidTransform RotationY(double radians);
  static RigidTransform RotationZ(double radians);

  const Eigen::Matrix3d& rotation() const { return rotation_; }
  const Eigen::Vector3d& translation() const { return translation_; }

  Point3 Apply(const Point3& p) const { return rotation_ * p + translation_; }
  Point3 operator()(const Point3& p) const { return Apply(p); }

  // max(|R^T R - I|_inf, |det R - 1|).
  static double OrthonormalityDrift(const Eigen::Matrix3d& rotation);

  bool operator==(const RigidTransform& other) const {
    return rotation_ == other.rotation_ && translation_ == other.translation_;
  }

 private:
  RigidTransform(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation);

  friend RigidTransform Compose(const RigidTransform& a, const RigidTransform& b);
  friend RigidTransform Invert(const RigidTransform& t);

  Eigen::Matrix3d rotation_;
  Eigen::Vector3d translation_;
};

// Returns a ∘ b, i.e. the transform X -> a(b(X)).
RigidTransform Compose(const RigidTransform& a, const RigidTransform& b);

RigidTransform Invert(const RigidTransform& t);

// Given camera-to-world poses of two frames, returns the transform taking
// points in src camera coordinates to dst camera coordinates:
// invert(pose_dst) ∘ pose_src.
RigidTransform RelativeTransform(const RigidTransform& pose_src,
                                 const RigidTransform& pose_dst);

// u = fx x / z + cx, v = fy y / z + cy. Returns nullopt when the point is
// behind the camera (z <= z_min). Points outside the image are still returned.
std::optional<Pixel> Project(const CameraIntrinsics& k, const Point3& p_camera,
                             double z_min = kDefaultZMin);

}  // namespace footprint::geometry

#endif  // FOOTPRINT_GEOMETRY_H_
