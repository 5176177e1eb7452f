#pragma once

// Rule-of-thirds framing for the first frame of a trajectory, and the
// first-frame offset that is then applied uniformly to the whole trajectory.
//
// All functions take the actor pose and the cameras in one shared frame
// (normally the actor-centred frame).

#include <array>
#include <cstdint>

#include <Eigen/Core>

#include "immcam/projection.hpp"
#include "immcam/scene.hpp"

namespace immcam {

struct AestheticsConfig {
  double lambda_cmp = 1.0;
  double lambda_adj = 0.25;
  double lambda_vis = 0.01;
  /// Soft-min temperature for the composition loss, pixels.
  double tau_cmp = 10.0;
  /// Sigmoid temperature on the signed frustum margin, pixels.
  double tau_vis = 20.0;
  /// Lie-to-stand threshold as a fraction of actor height.
  double lie_stand_ratio = 0.2;
  /// Diagonal weights of the adjustment norm (x, y, z, yaw, pitch, roll).
  std::array<double, kDof> adj_weights{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  double body_center_sigma = kBodyCenterSigma;

  double position_bound = 2.0;       // metres
  double rotation_bound_deg = 30.0;  // degrees
  int starts = 8;
  int max_evaluations = 500;  // per start
  double diameter_tolerance = 1e-4;
  std::uint64_t seed = 0;
};

/// World-up component of head minus pelvis.
double head_pelvis_diff(const ActorPoseFrame& pose, const SkeletonLayout& layout);

struct ShotSide {
  double degrees = 0.0;  // [0, 360), 0 = camera in front, 90 = camera on actor's right
  bool fallback = false;
};

/// Horizontal angle from the actor's forward direction to the actor->camera
/// direction. Forward is (left_shoulder - right_shoulder) x up; when that is
/// degenerate the horizontal pelvis->head direction is used instead (flagged).
ShotSide relative_angle(const ActorPoseFrame& pose, const CameraPlacement& cam,
                        const SkeletonLayout& layout);

struct AlignmentCandidates {
  std::array<Eigen::Vector2d, 2> points;

  bool operator==(const AlignmentCandidates& o) const {
    return points[0] == o.points[0] && points[1] == o.points[1];
  }
};

/// Rule-of-thirds decision tree. Side ranges [45, 135] (right) and
/// [225, 315] (left) are inclusive.
AlignmentCandidates alignment_candidates(double hpd, double threshold, double ra_degrees,
                                         int frame_width, int frame_height,
                                         const Eigen::Vector2d& body_center);

/// -tau * ln((exp(-a/tau) + exp(-b/tau)) / 2); lies in [min, min + tau ln 2].
double soft_min(double a, double b, double tau);

/// Distance from the on-frame body centre to the nearest alignment candidate.
/// A blank shot scores the frame diagonal.
double composition_loss(const ActorPoseFrame& pose, const CameraPlacement& cam,
                        const CameraIntrinsics& intr, const SkeletonLayout& layout,
                        const AestheticsConfig& config = {});

/// Soft-min variant used by the optimiser. Blank shots score the frame
/// diagonal scaled by (1 + angle off the torso / pi) to steer back on frame.
double smooth_composition_loss(const ActorPoseFrame& pose, const CameraPlacement& cam,
                               const CameraIntrinsics& intr, const SkeletonLayout& layout,
                               const AestheticsConfig& config = {});

double adjustment_loss(const DofVector& offset, const AestheticsConfig& config = {});

/// Number of joints whose visibility differs between the two cameras.
double visualization_loss(const ActorPoseFrame& pose, const CameraPlacement& before,
                          const CameraPlacement& after, const CameraIntrinsics& intr);

/// The after-camera's visibility bits are replaced by sigmoid(margin / tau).
double smooth_visualization_loss(const ActorPoseFrame& pose, const CameraPlacement& before,
                                 const CameraPlacement& after, const CameraIntrinsics& intr,
                                 double tau);

CameraPlacement offset_camera(const CameraPlacement& cam, const DofVector& offset);

double aesthetic_loss(const ActorPoseFrame& pose, const CameraPlacement& before,
                      const DofVector& offset, const CameraIntrinsics& intr,
                      const SkeletonLayout& layout, const AestheticsConfig& config = {});

double smooth_aesthetic_loss(const ActorPoseFrame& pose, const CameraPlacement& before,
                             const DofVector& offset, const CameraIntrinsics& intr,
                             const SkeletonLayout& layout, const AestheticsConfig& config = {});

struct Adjustment {
  DofVector offset;
  double loss_at_zero = 0.0;
  double loss = 0.0;
  int evaluations = 0;
  int best_start = 0;
};

/// Multi-start simplex minimisation of the smoothed aesthetic loss over the
/// offset box. Throws `Error{AdjustmentFailed}` when the best offset still
/// leaves the actor off frame.
Adjustment adjust(const ActorPoseFrame& pose, const CameraPlacement& cam, const CameraIntrinsics& intr,
                  const SkeletonLayout& layout, const AestheticsConfig& config = {});

CameraTrajectory apply_offset(const CameraTrajectory& traj, const DofVector& offset);

}  // namespace immcam
