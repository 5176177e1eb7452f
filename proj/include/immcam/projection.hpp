#pragma once

// Pinhole projection of actor joints into the shot.
//
// Camera orientation is built yaw (about world +Y), then pitch, then roll.
// The camera frame is right-handed with +X right, +Y down and +Z forward, so
// pixel coordinates have their origin top-left, +u right and +v down. With
// all angles zero the camera looks along world +Z.

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "immcam/scene.hpp"

namespace immcam {

/// World-from-camera rotation; columns are the camera's right, down and
/// forward axes expressed in world coordinates.
Eigen::Matrix3d camera_rotation(const DofVector& pose);

/// (yaw, pitch) that points the camera forward axis from `eye` at `target`.
std::pair<double, double> look_at_angles(const Eigen::Vector3d& eye, const Eigen::Vector3d& target);

struct ShotPoint {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;
  bool on_frame = false;
};

/// Points with depth <= 0 are reported with u = v = 0 and on_frame = false.
ShotPoint project_point(const Eigen::Vector3d& p, const CameraPlacement& cam,
                        const CameraIntrinsics& intr);

/// Signed distance in pixels from the shot point to the nearest frame edge:
/// positive inside the frame, negative outside. Points behind the camera get
/// minus the frame diagonal.
double frustum_margin(const ShotPoint& sp, const CameraIntrinsics& intr);

struct ProjectedPose {
  std::vector<ShotPoint> points;
  /// Per-joint (u, v); off-frame joints are encoded as (0, 0).
  std::vector<Eigen::Vector2d> encoded;

  std::size_t on_frame_count() const;
};

ProjectedPose project_pose(const ActorPoseFrame& pose, const CameraPlacement& cam,
                           const CameraIntrinsics& intr);

inline constexpr double kBodyCenterSigma = 2.0;

/// Gaussian-weighted mean of the on-frame joints. The weight of joint j is
/// exp(-d^2 / (2 sigma^2)) with d the kinematic-tree hop distance to the torso
/// centre. Throws `Error{BlankShot}` when nothing is on frame.
Eigen::Vector2d body_center(const ProjectedPose& pp, const SkeletonLayout& layout,
                            double sigma = kBodyCenterSigma);

struct VisibilityVector {
  std::vector<bool> bits;

  std::size_t count() const;
  bool operator==(const VisibilityVector&) const = default;
};

VisibilityVector visibility_vector(const ActorPoseFrame& pose, const CameraPlacement& cam,
                                   const CameraIntrinsics& intr);

/// Binarizes the (0,0)-encoded projection by thresholding u + v at zero.
/// Agrees with the frustum test except for a joint landing exactly on pixel
/// (0, 0).
VisibilityVector visibility_from_encoding(const ProjectedPose& pp);

}  // namespace immcam
