#include "immcam/projection.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>

#include "immcam/error.hpp"

namespace immcam {

Eigen::Matrix3d camera_rotation(const DofVector& pose) {
  using Eigen::AngleAxisd;
  using Eigen::Vector3d;
  // Base frame at zero angles: right = -X, down = -Y, forward = +Z.
  static const Eigen::Matrix3d base = Eigen::Vector3d(-1.0, -1.0, 1.0).asDiagonal();
  // Positive pitch tilts the forward axis towards +Y (looking up).
  const Eigen::Matrix3d r = (AngleAxisd(pose.yaw(), Vector3d::UnitY()) *
                             AngleAxisd(-pose.pitch(), Vector3d::UnitX()) *
                             AngleAxisd(pose.roll(), Vector3d::UnitZ()))
                                .toRotationMatrix();
  return r * base;
}

std::pair<double, double> look_at_angles(const Eigen::Vector3d& eye, const Eigen::Vector3d& target) {
  const Eigen::Vector3d d = target - eye;
  const double yaw = std::atan2(d.x(), d.z());
  const double pitch = std::atan2(d.y(), std::hypot(d.x(), d.z()));
  return {yaw, pitch};
}

namespace {

ShotPoint project_camera_frame(const Eigen::Vector3d& pc, const CameraIntrinsics& intr) {
  ShotPoint sp;
  sp.depth = std::isfinite(pc.z()) ? pc.z() : 0.0;
  if (!(sp.depth > 0.0)) return sp;
  // Sensor plane (mm) then pixels.
  const double xs = intr.focal_length() * pc.x() / sp.depth;
  const double ys = intr.focal_length() * pc.y() / sp.depth;
  sp.u = intr.cx() + xs * intr.frame_width() / intr.sensor_width();
  sp.v = intr.cy() + ys * intr.frame_height() / intr.sensor_height();
  sp.on_frame = std::isfinite(sp.u) && std::isfinite(sp.v) && sp.u >= 0.0 &&
                sp.u < intr.frame_width() && sp.v >= 0.0 && sp.v < intr.frame_height();
  if (!sp.on_frame && !(std::isfinite(sp.u) && std::isfinite(sp.v))) sp.u = sp.v = 0.0;
  return sp;
}

}  // namespace

ShotPoint project_point(const Eigen::Vector3d& p, const CameraPlacement& cam,
                        const CameraIntrinsics& intr) {
  return project_camera_frame(camera_rotation(cam.pose).transpose() * (p - cam.pose.position()), intr);
}

double frustum_margin(const ShotPoint& sp, const CameraIntrinsics& intr) {
  if (!(sp.depth > 0.0)) return -intr.diagonal();
  const double inside = std::min({sp.u, intr.frame_width() - sp.u, sp.v, intr.frame_height() - sp.v});
  return inside;
}

std::size_t ProjectedPose::on_frame_count() const {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(), [](const ShotPoint& p) { return p.on_frame; }));
}

ProjectedPose project_pose(const ActorPoseFrame& pose, const CameraPlacement& cam,
                           const CameraIntrinsics& intr) {
  const Eigen::Matrix3d world_to_cam = camera_rotation(cam.pose).transpose();
  const Eigen::Vector3d eye = cam.pose.position();
  ProjectedPose pp;
  pp.points.reserve(pose.joints.size());
  pp.encoded.reserve(pose.joints.size());
  for (const auto& joint : pose.joints) {
    const ShotPoint sp = project_camera_frame(world_to_cam * (joint.position() - eye), intr);
    pp.points.push_back(sp);
    pp.encoded.push_back(sp.on_frame ? Eigen::Vector2d(sp.u, sp.v) : Eigen::Vector2d::Zero());
  }
  return pp;
}

Eigen::Vector2d body_center(const ProjectedPose& pp, const SkeletonLayout& layout, double sigma) {
  const std::vector<int> hops = layout.hop_distances(layout.torso_center_index());
  Eigen::Vector2d acc = Eigen::Vector2d::Zero();
  double total = 0.0;
  for (std::size_t j = 0; j < pp.points.size(); ++j) {
    if (!pp.points[j].on_frame) continue;
    const double d = hops[j];
    const double w = std::exp(-d * d / (2.0 * sigma * sigma));
    acc += w * Eigen::Vector2d(pp.points[j].u, pp.points[j].v);
    total += w;
  }
  if (total <= 0.0) throw Error(ErrorCode::BlankShot, "no joint is on frame", "body_center");
  return acc / total;
}

std::size_t VisibilityVector::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), true));
}

VisibilityVector visibility_vector(const ActorPoseFrame& pose, const CameraPlacement& cam,
                                   const CameraIntrinsics& intr) {
  const ProjectedPose pp = project_pose(pose, cam, intr);
  VisibilityVector vis;
  vis.bits.reserve(pp.points.size());
  for (const auto& sp : pp.points) vis.bits.push_back(sp.on_frame);
  return vis;
}

VisibilityVector visibility_from_encoding(const ProjectedPose& pp) {
  VisibilityVector vis;
  vis.bits.reserve(pp.encoded.size());
  for (const auto& e : pp.encoded) vis.bits.push_back(e.x() + e.y() > 0.0);
  return vis;
}

}  // namespace immcam
