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

#include "footprint/geometry.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "footprint/error.h"

namespace footprint::geometry {
namespace {

bool AllFinite(const Eigen::Matrix3d& m) { return m.allFinite(); }

// Nearest rotation in the Frobenius sense.
Eigen::Matrix3d Reorthonormalize(const Eigen::Matrix3d& r) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0) u.col(2) *= -1.0;
  return u * v.transpose();
}

Eigen::Matrix3d CheckedRotation(const Eigen::Matrix3d& r) {
  const double drift = RigidTransform::OrthonormalityDrift(r);
  if (drift <= kOrthonormalTolerance) return r;
  if (drift <= kRepairableDrift) return Reorthonormalize(r);
  throw Error(ErrorCode::kInvalidTransform,
              "rotation drifted from SO(3) by " + std::to_string(drift));
}

}  // namespace

void CameraIntrinsics::Validate() const {
  if (!std::isfinite(fx) || !std::isfinite(fy) || !std::isfinite(cx) ||
      !std::isfinite(cy)) {
    throw Error(ErrorCode::kInvalidArgument, "intrinsics must be finite");
  }
  if (fx <= 0 || fy <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "focal lengths must be positive");
  }
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "image size must be positive");
  }
}

RigidTransform::RigidTransform()
    : rotation_(Eigen::Matrix3d::Identity()), translation_(Eigen::Vector3d::Zero()) {}

RigidTransform::RigidTransform(const Eigen::Matrix3d& rotation,
                               const Eigen::Vector3d& translation)
    : rotation_(rotation), translation_(translation) {}

RigidTransform RigidTransform::FromRotationTranslation(
    const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation) {
  if (!AllFinite(rotation) || !translation.allFinite()) {
    throw Error(ErrorCode::kInvalidTransform, "non-finite rotation or translation");
  }
  const double drift = OrthonormalityDrift(rotation);
  if (drift > kOrthonormalTolerance) {
    throw Error(ErrorCode::kInvalidTransform,
                "rotation is not orthonormal with det 1 (drift " +
                    std::to_string(drift) + ")");
  }
  return RigidTransform(rotation, translation);
}

RigidTransform RigidTransform::Translation(double x, double y, double z) {
  return FromRotationTranslation(Eigen::Matrix3d::Identity(), Eigen::Vector3d(x, y, z));
}

RigidTransform RigidTransform::RotationX(double radians) {
  return FromRotationTranslation(
      Eigen::AngleAxisd(radians, Eigen::Vector3d::UnitX()).toRotationMatrix(),
      Eigen::Vector3d::Zero());
}

RigidTransform RigidTransform::RotationY(double radians) {
  return FromRotationTranslation(
      Eigen::AngleAxisd(radians, Eigen::Vector3d::UnitY()).toRotationMatrix(),
      Eigen::Vector3d::Zero());
}

RigidTransform RigidTransform::RotationZ(double radians) {
  return FromRotationTranslation(
      Eigen::AngleAxisd(radians, Eigen::Vector3d::UnitZ()).toRotationMatrix(),
      Eigen::Vector3d::Zero());
}

double RigidTransform::OrthonormalityDrift(const Eigen::Matrix3d& rotation) {
  const Eigen::Matrix3d gram = rotation.transpose() * rotation - Eigen::Matrix3d::Identity();
  const double orth = gram.cwiseAbs().maxCoeff();
  return std::max(orth, std::abs(rotation.determinant() - 1.0));
}

RigidTransform Compose(const RigidTransform& a, const RigidTransform& b) {
  const Eigen::Matrix3d r = CheckedRotation(a.rotation_ * b.rotation_);
  return RigidTransform(r, a.rotation_ * b.translation_ + a.translation_);
}

RigidTransform Invert(const RigidTransform& t) {
  const Eigen::Matrix3d rt = t.rotation_.transpose();
  return RigidTransform(rt, -(rt * t.translation_));
}

RigidTransform RelativeTransform(const RigidTransform& pose_src,
                                 const RigidTransform& pose_dst) {
  return Compose(Invert(pose_dst), pose_src);
}

std::optional<Pixel> Project(const CameraIntrinsics& k, const Point3& p_camera,
                             double z_min) {
  if (!(p_camera.z() > z_min)) return std::nullopt;
  return Pixel{k.fx * p_camera.x() / p_camera.z() + k.cx,
               k.fy * p_camera.y() / p_camera.z() + k.cy};
}

}  // namespace footprint::geometry
