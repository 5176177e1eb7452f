#pragma once

// Core value types shared by every stage: 6-DOF vectors, skeleton layouts,
// actor pose sequences, emotion factor, camera placements/trajectories and
// intrinsics.
//
// World frame: right-handed, +Y up, metres. Angles are radians and are never
// wrapped silently.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace immcam {

inline constexpr std::size_t kDof = 6;

enum Axis : std::size_t { kX = 0, kY, kZ, kYaw, kPitch, kRoll };

std::string_view axis_name(std::size_t axis);

struct DofVector {
  std::array<double, kDof> v{};

  static DofVector from(double x, double y, double z, double yaw = 0.0, double pitch = 0.0,
                        double roll = 0.0) {
    return DofVector{{x, y, z, yaw, pitch, roll}};
  }

  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }

  double x() const { return v[kX]; }
  double y() const { return v[kY]; }
  double z() const { return v[kZ]; }
  double yaw() const { return v[kYaw]; }
  double pitch() const { return v[kPitch]; }
  double roll() const { return v[kRoll]; }

  Eigen::Vector3d position() const { return {v[kX], v[kY], v[kZ]}; }
  void set_position(const Eigen::Vector3d& p) {
    v[kX] = p.x();
    v[kY] = p.y();
    v[kZ] = p.z();
  }

  bool finite() const;

  DofVector& operator+=(const DofVector& o) {
    for (std::size_t i = 0; i < kDof; ++i) v[i] += o.v[i];
    return *this;
  }
  DofVector& operator-=(const DofVector& o) {
    for (std::size_t i = 0; i < kDof; ++i) v[i] -= o.v[i];
    return *this;
  }
  friend DofVector operator+(DofVector a, const DofVector& b) { return a += b; }
  friend DofVector operator-(DofVector a, const DofVector& b) { return a -= b; }
  friend DofVector operator*(DofVector a, double s) {
    for (auto& x : a.v) x *= s;
    return a;
  }

  bool operator==(const DofVector&) const = default;
};

double norm(const DofVector& d);

enum class Region { Head = 0, Arms, Torso, Legs };
inline constexpr std::size_t kRegionCount = 4;

std::string_view to_string(Region r);
std::optional<Region> parse_region(std::string_view name);

/// Joint naming, region partition and kinematic tree of one actor skeleton.
/// The constructor validates every invariant and throws `Error` otherwise.
class SkeletonLayout {
 public:
  SkeletonLayout(std::vector<std::string> joint_names, std::vector<Region> regions,
                 std::vector<int> parents, std::size_t torso_center_index,
                 std::size_t head_index, std::size_t pelvis_index, double actor_height);

  /// 17-joint pelvis-rooted layout with snake_case joint names.
  static SkeletonLayout make_default();

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& joint_names() const { return names_; }
  const std::vector<Region>& regions() const { return regions_; }
  const std::vector<int>& parents() const { return parents_; }
  Region region_of(std::size_t j) const { return regions_[j]; }
  int parent_of(std::size_t j) const { return parents_[j]; }
  std::size_t torso_center_index() const { return torso_center_; }
  std::size_t head_index() const { return head_; }
  std::size_t pelvis_index() const { return pelvis_; }
  double actor_height() const { return actor_height_; }

  std::optional<std::size_t> find(std::string_view name) const;
  std::optional<std::size_t> left_shoulder() const { return find("left_shoulder"); }
  std::optional<std::size_t> right_shoulder() const { return find("right_shoulder"); }

  /// Number of kinematic-tree edges between `from` and every joint.
  std::vector<int> hop_distances(std::size_t from) const;

  bool operator==(const SkeletonLayout&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<Region> regions_;
  std::vector<int> parents_;
  std::size_t torso_center_;
  std::size_t head_;
  std::size_t pelvis_;
  double actor_height_;
};

struct ActorPoseFrame {
  std::vector<DofVector> joints;

  bool operator==(const ActorPoseFrame&) const = default;
};

/// Upright rest pose for `SkeletonLayout::make_default()`, facing +Z with the
/// pelvis above the origin.
ActorPoseFrame default_rest_pose();

/// Returns `frame` with every joint position shifted by `-origin`.
ActorPoseFrame centered(const ActorPoseFrame& frame, const Eigen::Vector3d& origin);

class ActorPoseSequence {
 public:
  ActorPoseSequence(std::vector<ActorPoseFrame> frames, double fps);

  const std::vector<ActorPoseFrame>& frames() const { return frames_; }
  const ActorPoseFrame& operator[](std::size_t t) const { return frames_[t]; }
  std::size_t size() const { return frames_.size(); }
  std::size_t joint_count() const { return frames_.front().joints.size(); }
  double fps() const { return fps_; }

  bool operator==(const ActorPoseSequence&) const = default;

 private:
  std::vector<ActorPoseFrame> frames_;
  double fps_;
};

/// Origin of the actor-centred frame: the pelvis position at frame 0.
Eigen::Vector3d actor_origin(const ActorPoseSequence& seq, const SkeletonLayout& layout);

inline constexpr double kDefaultEmotionMax = 4.0;

/// E in (0, E_max]; < 1 relaxed, 1 neutral, > 1 tense.
class EmotionFactor {
 public:
  explicit EmotionFactor(double value, double e_max = kDefaultEmotionMax);

  double value() const { return value_; }
  bool relaxed() const { return value_ < 1.0; }
  bool tense() const { return value_ > 1.0; }

  bool operator==(const EmotionFactor&) const = default;

 private:
  double value_;
};

/// Camera pose in the actor-centred frame (see `actor_origin`).
struct CameraPlacement {
  DofVector pose;

  bool operator==(const CameraPlacement&) const = default;
};

/// Per-frame samples plus one uniform offset. The camera pose at frame t is
/// `placements[t] + offset`; keeping the offset separate means shifting a
/// trajectory never perturbs its inter-frame differences.
struct CameraTrajectory {
  std::vector<DofVector> placements;
  double fps = 30.0;
  DofVector offset;

  std::size_t size() const { return placements.size(); }
  DofVector pose(std::size_t t) const { return placements[t] + offset; }
  bool operator==(const CameraTrajectory&) const = default;
};

class CameraIntrinsics {
 public:
  /// 35 mm lens on a 36 x 20.25 mm sensor, 1920 x 1080 output.
  CameraIntrinsics() : CameraIntrinsics(35.0, 36.0, 20.25, 1920, 1080) {}
  CameraIntrinsics(double focal_length_mm, double sensor_width_mm, double sensor_height_mm,
                   int frame_width, int frame_height);

  double focal_length() const { return focal_; }
  double sensor_width() const { return sensor_w_; }
  double sensor_height() const { return sensor_h_; }
  int frame_width() const { return width_; }
  int frame_height() const { return height_; }

  double fx() const { return focal_ * width_ / sensor_w_; }
  double fy() const { return focal_ * height_ / sensor_h_; }
  double cx() const { return 0.5 * width_; }
  double cy() const { return 0.5 * height_; }
  double diagonal() const;

  bool operator==(const CameraIntrinsics&) const = default;

 private:
  double focal_;
  double sensor_w_;
  double sensor_h_;
  int width_;
  int height_;
};

using PoseRows = std::vector<ActorPoseFrame>;

/// |M_t - M_{t-1}| elementwise; row 0 is zero.
PoseRows compute_delta(const ActorPoseSequence& seq);

/// (M_t - M_{t-1}) * fps, signed; row 0 is zero.
PoseRows compute_velocity(const ActorPoseSequence& seq);

}  // namespace immcam
