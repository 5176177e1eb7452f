#include "immcam/aesthetics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Geometry>

#include "immcam/error.hpp"
#include "immcam/nelder_mead.hpp"
#include "immcam/random.hpp"

namespace immcam {

namespace {

const Eigen::Vector3d kUp = Eigen::Vector3d::UnitY();

double deg(double rad) { return rad * 180.0 / std::numbers::pi; }
double rad(double deg) { return deg * std::numbers::pi / 180.0; }

Eigen::Vector3d horizontal(const Eigen::Vector3d& v) { return v - v.dot(kUp) * kUp; }

bool in_range(double x, double lo, double hi) { return x >= lo && x <= hi; }

struct Framing {
  bool blank = true;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  AlignmentCandidates candidates;
};

Framing framing(const ActorPoseFrame& pose, const CameraPlacement& cam, const CameraIntrinsics& intr,
                const SkeletonLayout& layout, const AestheticsConfig& config) {
  Framing f;
  const ProjectedPose pp = project_pose(pose, cam, intr);
  if (pp.on_frame_count() == 0) return f;
  f.blank = false;
  f.center = body_center(pp, layout, config.body_center_sigma);
  const double hpd = head_pelvis_diff(pose, layout);
  const double ra = relative_angle(pose, cam, layout).degrees;
  f.candidates = alignment_candidates(hpd, config.lie_stand_ratio * layout.actor_height(), ra,
                                      intr.frame_width(), intr.frame_height(), f.center);
  return f;
}

}  // namespace

double head_pelvis_diff(const ActorPoseFrame& pose, const SkeletonLayout& layout) {
  return (pose.joints[layout.head_index()].position() - pose.joints[layout.pelvis_index()].position())
      .dot(kUp);
}

ShotSide relative_angle(const ActorPoseFrame& pose, const CameraPlacement& cam,
                        const SkeletonLayout& layout) {
  constexpr double kTiny = 1e-9;
  ShotSide side;
  const Eigen::Vector3d pelvis = pose.joints[layout.pelvis_index()].position();

  Eigen::Vector3d forward = Eigen::Vector3d::Zero();
  const auto l = layout.left_shoulder();
  const auto r = layout.right_shoulder();
  if (l && r) {
    const Eigen::Vector3d across = pose.joints[*l].position() - pose.joints[*r].position();
    forward = horizontal(across.cross(kUp));
  }
  if (forward.norm() < kTiny) {
    side.fallback = true;
    forward = horizontal(pose.joints[layout.head_index()].position() - pelvis);
    if (forward.norm() < kTiny) forward = Eigen::Vector3d::UnitZ();
  }
  forward.normalize();
  const Eigen::Vector3d right = forward.cross(kUp);

  const Eigen::Vector3d to_cam = horizontal(cam.pose.position() - pelvis);
  if (to_cam.norm() < kTiny) return side;
  double a = deg(std::atan2(to_cam.dot(right), to_cam.dot(forward)));
  if (a < 0.0) a += 360.0;
  if (a >= 360.0) a -= 360.0;
  side.degrees = a;
  return side;
}

AlignmentCandidates alignment_candidates(double hpd, double threshold, double ra_degrees,
                                         int frame_width, int frame_height,
                                         const Eigen::Vector2d& body_center) {
  const double w = frame_width;
  const double h = frame_height;
  const double um = body_center.x();
  const double vm = body_center.y();
  const bool right_side = in_range(ra_degrees, 45.0, 135.0);
  const bool left_side = in_range(ra_degrees, 225.0, 315.0);

  AlignmentCandidates c;
  if (hpd >= threshold) {
    if (right_side) {
      c.points = {Eigen::Vector2d(w / 3.0, vm), Eigen::Vector2d(w / 3.0, vm)};
    } else if (left_side) {
      c.points = {Eigen::Vector2d(2.0 * w / 3.0, vm), Eigen::Vector2d(2.0 * w / 3.0, vm)};
    } else {
      c.points = {Eigen::Vector2d(w / 3.0, vm), Eigen::Vector2d(2.0 * w / 3.0, vm)};
    }
  } else if (right_side || left_side) {
    c.points = {Eigen::Vector2d(um, h / 3.0), Eigen::Vector2d(um, 2.0 * h / 3.0)};
  } else {
    c.points = {Eigen::Vector2d(w / 3.0, vm), Eigen::Vector2d(2.0 * w / 3.0, vm)};
  }
  return c;
}

double soft_min(double a, double b, double tau) {
  const double m = std::min(a, b);
  // Shifted log-sum-exp for stability.
  return m - tau * std::log(0.5 * (std::exp(-(a - m) / tau) + std::exp(-(b - m) / tau)));
}

double composition_loss(const ActorPoseFrame& pose, const CameraPlacement& cam,
                        const CameraIntrinsics& intr, const SkeletonLayout& layout,
                        const AestheticsConfig& config) {
  const Framing f = framing(pose, cam, intr, layout, config);
  if (f.blank) return intr.diagonal();
  return std::min((f.center - f.candidates.points[0]).norm(), (f.center - f.candidates.points[1]).norm());
}

double smooth_composition_loss(const ActorPoseFrame& pose, const CameraPlacement& cam,
                               const CameraIntrinsics& intr, const SkeletonLayout& layout,
                               const AestheticsConfig& config) {
  const Framing f = framing(pose, cam, intr, layout, config);
  if (f.blank) {
    const Eigen::Vector3d forward = camera_rotation(cam.pose).col(2);
    Eigen::Vector3d to_torso = pose.joints[layout.torso_center_index()].position() - cam.pose.position();
    const double n = to_torso.norm();
    const double off_axis = n > 0.0 ? std::acos(std::clamp(forward.dot(to_torso / n), -1.0, 1.0)) : 0.0;
    return intr.diagonal() * (1.0 + off_axis / std::numbers::pi);
  }
  return soft_min((f.center - f.candidates.points[0]).norm(), (f.center - f.candidates.points[1]).norm(),
                  config.tau_cmp);
}

double adjustment_loss(const DofVector& offset, const AestheticsConfig& config) {
  double s = 0.0;
  for (std::size_t a = 0; a < kDof; ++a) {
    const double w = config.adj_weights[a] * offset[a];
    s += w * w;
  }
  return std::sqrt(s);
}

double visualization_loss(const ActorPoseFrame& pose, const CameraPlacement& before,
                          const CameraPlacement& after, const CameraIntrinsics& intr) {
  const VisibilityVector b_prev = visibility_vector(pose, before, intr);
  const VisibilityVector b_next = visibility_vector(pose, after, intr);
  double flips = 0.0;
  for (std::size_t j = 0; j < b_prev.bits.size(); ++j) {
    const double p = b_prev.bits[j] ? 1.0 : 0.0;
    const double q = b_next.bits[j] ? 1.0 : 0.0;
    flips += p * (1.0 - q) + (1.0 - p) * q;
  }
  return flips;
}

double smooth_visualization_loss(const ActorPoseFrame& pose, const CameraPlacement& before,
                                 const CameraPlacement& after, const CameraIntrinsics& intr,
                                 double tau) {
  const VisibilityVector b_prev = visibility_vector(pose, before, intr);
  const ProjectedPose next = project_pose(pose, after, intr);
  double loss = 0.0;
  for (std::size_t j = 0; j < b_prev.bits.size(); ++j) {
    const double p = b_prev.bits[j] ? 1.0 : 0.0;
    const double q = 1.0 / (1.0 + std::exp(-frustum_margin(next.points[j], intr) / tau));
    loss += p * (1.0 - q) + (1.0 - p) * q;
  }
  return loss;
}

CameraPlacement offset_camera(const CameraPlacement& cam, const DofVector& offset) {
  return CameraPlacement{cam.pose + offset};
}

double aesthetic_loss(const ActorPoseFrame& pose, const CameraPlacement& before,
                      const DofVector& offset, const CameraIntrinsics& intr,
                      const SkeletonLayout& layout, const AestheticsConfig& config) {
  const CameraPlacement after = offset_camera(before, offset);
  return config.lambda_cmp * composition_loss(pose, after, intr, layout, config) +
         config.lambda_adj * adjustment_loss(offset, config) +
         config.lambda_vis * visualization_loss(pose, before, after, intr);
}

double smooth_aesthetic_loss(const ActorPoseFrame& pose, const CameraPlacement& before,
                             const DofVector& offset, const CameraIntrinsics& intr,
                             const SkeletonLayout& layout, const AestheticsConfig& config) {
  const CameraPlacement after = offset_camera(before, offset);
  return config.lambda_cmp * smooth_composition_loss(pose, after, intr, layout, config) +
         config.lambda_adj * adjustment_loss(offset, config) +
         config.lambda_vis * smooth_visualization_loss(pose, before, after, intr, config.tau_vis);
}

Adjustment adjust(const ActorPoseFrame& pose, const CameraPlacement& cam, const CameraIntrinsics& intr,
                  const SkeletonLayout& layout, const AestheticsConfig& config) {
  if (!(config.position_bound >= 0.0 && config.rotation_bound_deg >= 0.0) || config.starts < 1)
    throw Error(ErrorCode::InvalidArgument, "invalid optimiser bounds", "bounds");

  std::array<double, kDof> scale{};
  for (std::size_t a = 0; a < kDof; ++a)
    scale[a] = a < 3 ? config.position_bound : rad(config.rotation_bound_deg);

  // Search runs on box-normalised coordinates in [-1, 1]^6.
  auto to_offset = [&](std::span<const double> z) {
    DofVector o;
    for (std::size_t a = 0; a < kDof; ++a) o[a] = std::clamp(z[a], -1.0, 1.0) * scale[a];
    return o;
  };

  Adjustment best;
  best.loss_at_zero = smooth_aesthetic_loss(pose, cam, DofVector{}, intr, layout, config);
  best.loss = best.loss_at_zero;

  const double overshoot_weight = intr.diagonal();
  Objective objective = [&](std::span<const double> z) {
    const DofVector o = to_offset(z);
    const double loss = smooth_aesthetic_loss(pose, cam, o, intr, layout, config);
    if (loss < best.loss) {
      best.loss = loss;
      best.offset = o;
    }
    double overshoot = 0.0;
    for (std::size_t a = 0; a < kDof; ++a) overshoot += std::max(0.0, std::abs(z[a]) - 1.0);
    return loss + overshoot_weight * overshoot;
  };

  NelderMeadOptions nm;
  nm.max_evaluations = config.max_evaluations;
  nm.diameter_tolerance = config.diameter_tolerance;
  const std::array<double, kDof> steps{0.1, 0.1, 0.1, 0.1, 0.1, 0.1};

  Rng rng(mix_seed(config.seed, 0xad5));
  for (int s = 0; s < config.starts; ++s) {
    std::vector<double> z0(kDof, 0.0);
    if (s > 0)
      for (auto& z : z0) z = rng.uniform(-0.5, 0.5);
    const double before = best.loss;
    const NelderMeadResult r = nelder_mead(objective, z0, steps, nm);
    best.evaluations += r.evaluations;
    if (best.loss < before) best.best_start = s;
  }

  if (project_pose(pose, offset_camera(cam, best.offset), intr).on_frame_count() == 0)
    throw Error(ErrorCode::AdjustmentFailed, "no start produced a visible shot",
                "starts=" + std::to_string(config.starts) +
                    " evaluations=" + std::to_string(best.evaluations));
  return best;
}

CameraTrajectory apply_offset(const CameraTrajectory& traj, const DofVector& offset) {
  CameraTrajectory out = traj;
  out.offset += offset;
  return out;
}

}  // namespace immcam
