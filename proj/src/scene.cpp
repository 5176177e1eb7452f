#include "immcam/scene.hpp"

#include <cmath>
#include <deque>
#include <string>

#include "immcam/error.hpp"

namespace immcam {

std::string_view axis_name(std::size_t axis) {
  static constexpr std::array<std::string_view, kDof> names{"x", "y", "z", "yaw", "pitch", "roll"};
  return axis < kDof ? names[axis] : "?";
}

bool DofVector::finite() const {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

double norm(const DofVector& d) {
  double s = 0.0;
  for (double x : d.v) s += x * x;
  return std::sqrt(s);
}

std::string_view to_string(Region r) {
  switch (r) {
    case Region::Head: return "head";
    case Region::Arms: return "arms";
    case Region::Torso: return "torso";
    case Region::Legs: return "legs";
  }
  return "?";
}

std::optional<Region> parse_region(std::string_view name) {
  if (name == "head") return Region::Head;
  if (name == "arms") return Region::Arms;
  if (name == "torso") return Region::Torso;
  if (name == "legs") return Region::Legs;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// SkeletonLayout

SkeletonLayout::SkeletonLayout(std::vector<std::string> joint_names, std::vector<Region> regions,
                               std::vector<int> parents, std::size_t torso_center_index,
                               std::size_t head_index, std::size_t pelvis_index,
                               double actor_height)
    : names_(std::move(joint_names)),
      regions_(std::move(regions)),
      parents_(std::move(parents)),
      torso_center_(torso_center_index),
      head_(head_index),
      pelvis_(pelvis_index),
      actor_height_(actor_height) {
  const std::size_t n = names_.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "skeleton has no joints", "skeleton.joint_names");
  if (regions_.size() != n)
    throw Error(ErrorCode::InvalidArgument, "every joint needs exactly one region", "skeleton.regions");
  if (parents_.size() != n)
    throw Error(ErrorCode::InvalidArgument, "parents must list one entry per joint", "skeleton.parents");
  if (!(std::isfinite(actor_height_) && actor_height_ > 0.0))
    throw Error(ErrorCode::InvalidArgument, "actor_height must be positive", "skeleton.actor_height");

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i + 1; k < n; ++k)
      if (names_[i] == names_[k])
        throw Error(ErrorCode::InvalidArgument, "duplicate joint name '" + names_[i] + "'",
                    "skeleton.joint_names");

  std::size_t roots = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const int p = parents_[j];
    if (p < 0) {
      ++roots;
    } else if (static_cast<std::size_t>(p) >= n || static_cast<std::size_t>(p) == j) {
      throw Error(ErrorCode::InvalidArgument, "invalid parent for joint '" + names_[j] + "'",
                  "skeleton.parents[" + std::to_string(j) + "]");
    }
  }
  if (roots != 1)
    throw Error(ErrorCode::InvalidArgument, "kinematic tree must have exactly one root",
                "skeleton.parents");
  // Walking up from any joint must reach the root within n steps.
  for (std::size_t j = 0; j < n; ++j) {
    int cur = static_cast<int>(j);
    std::size_t steps = 0;
    while (parents_[cur] >= 0) {
      cur = parents_[cur];
      if (++steps > n)
        throw Error(ErrorCode::InvalidArgument, "kinematic tree has a cycle at '" + names_[j] + "'",
                    "skeleton.parents");
    }
  }

  if (torso_center_ >= n || head_ >= n || pelvis_ >= n)
    throw Error(ErrorCode::InvalidArgument, "skeleton index out of range", "skeleton.indices");
  if (regions_[head_] != Region::Head)
    throw Error(ErrorCode::InvalidArgument, "head joint must belong to the head region",
                "skeleton.indices.head");
  if (regions_[pelvis_] != Region::Torso && regions_[pelvis_] != Region::Legs)
    throw Error(ErrorCode::InvalidArgument, "pelvis joint must belong to the torso or legs region",
                "skeleton.indices.pelvis");
}

SkeletonLayout SkeletonLayout::make_default() {
  using R = Region;
  return SkeletonLayout(
      {"pelvis", "right_hip", "right_knee", "right_ankle", "left_hip", "left_knee", "left_ankle",
       "spine", "thorax", "neck", "head", "left_shoulder", "left_elbow", "left_wrist",
       "right_shoulder", "right_elbow", "right_wrist"},
      {R::Torso, R::Legs, R::Legs, R::Legs, R::Legs, R::Legs, R::Legs, R::Torso, R::Torso, R::Head,
       R::Head, R::Arms, R::Arms, R::Arms, R::Arms, R::Arms, R::Arms},
      {-1, 0, 1, 2, 0, 4, 5, 0, 7, 8, 9, 8, 11, 12, 8, 14, 15},
      /*torso_center=*/7, /*head=*/10, /*pelvis=*/0, /*actor_height=*/1.75);
}

std::optional<std::size_t> SkeletonLayout::find(std::string_view name) const {
  for (std::size_t j = 0; j < names_.size(); ++j)
    if (names_[j] == name) return j;
  return std::nullopt;
}

std::vector<int> SkeletonLayout::hop_distances(std::size_t from) const {
  const std::size_t n = size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (parents_[j] >= 0) {
      adj[j].push_back(static_cast<std::size_t>(parents_[j]));
      adj[static_cast<std::size_t>(parents_[j])].push_back(j);
    }
  }
  std::vector<int> dist(n, -1);
  std::deque<std::size_t> queue{from};
  dist[from] = 0;
  while (!queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    for (std::size_t nb : adj[cur]) {
      if (dist[nb] < 0) {
        dist[nb] = dist[cur] + 1;
        queue.push_back(nb);
      }
    }
  }
  return dist;
}

ActorPoseFrame default_rest_pose() {
  auto p = [](double x, double y, double z) { return DofVector::from(x, y, z); };
  return ActorPoseFrame{{
      p(0.0, 0.95, 0.0),     // pelvis
      p(-0.10, 0.93, 0.0),   // right_hip
      p(-0.10, 0.52, 0.01),  // right_knee
      p(-0.10, 0.08, 0.0),   // right_ankle
      p(0.10, 0.93, 0.0),    // left_hip
      p(0.10, 0.52, 0.01),   // left_knee
      p(0.10, 0.08, 0.0),    // left_ankle
      p(0.0, 1.15, 0.0),     // spine
      p(0.0, 1.38, 0.0),     // thorax
      p(0.0, 1.52, 0.01),    // neck
      p(0.0, 1.66, 0.02),    // head
      p(0.18, 1.42, 0.0),    // left_shoulder
      p(0.22, 1.14, 0.0),    // left_elbow
      p(0.24, 0.88, 0.03),   // left_wrist
      p(-0.18, 1.42, 0.0),   // right_shoulder
      p(-0.22, 1.14, 0.0),   // right_elbow
      p(-0.24, 0.88, 0.03),  // right_wrist
  }};
}

ActorPoseFrame centered(const ActorPoseFrame& frame, const Eigen::Vector3d& origin) {
  ActorPoseFrame out = frame;
  for (auto& j : out.joints) j.set_position(j.position() - origin);
  return out;
}

// ---------------------------------------------------------------------------
// ActorPoseSequence

ActorPoseSequence::ActorPoseSequence(std::vector<ActorPoseFrame> frames, double fps)
    : frames_(std::move(frames)), fps_(fps) {
  if (frames_.size() < 2)
    throw Error(ErrorCode::InvalidSequence, "T >= 2 required",
                "frames (got " + std::to_string(frames_.size()) + ")");
  if (!(std::isfinite(fps_) && fps_ > 0.0))
    throw Error(ErrorCode::InvalidSequence, "fps must be finite and positive", "fps");
  const std::size_t j = frames_.front().joints.size();
  if (j == 0) throw Error(ErrorCode::InvalidSequence, "frames carry no joints", "frames[0]");
  for (std::size_t t = 0; t < frames_.size(); ++t) {
    if (frames_[t].joints.size() != j)
      throw Error(ErrorCode::InvalidSequence, "inconsistent joint count",
                  "frames[" + std::to_string(t) + "]");
    for (std::size_t k = 0; k < j; ++k)
      if (!frames_[t].joints[k].finite())
        throw Error(ErrorCode::InvalidSequence, "non-finite joint value",
                    "frames[" + std::to_string(t) + "][" + std::to_string(k) + "]");
  }
}

Eigen::Vector3d actor_origin(const ActorPoseSequence& seq, const SkeletonLayout& layout) {
  return seq[0].joints[layout.pelvis_index()].position();
}

EmotionFactor::EmotionFactor(double value, double e_max) : value_(value) {
  if (!(std::isfinite(value) && value > 0.0))
    throw Error(ErrorCode::InvalidArgument, "emotion must be positive", "emotion");
  if (value > e_max)
    throw Error(ErrorCode::InvalidArgument,
                "emotion exceeds E_max (" + std::to_string(e_max) + ")", "emotion");
}

CameraIntrinsics::CameraIntrinsics(double focal_length_mm, double sensor_width_mm,
                                   double sensor_height_mm, int frame_width, int frame_height)
    : focal_(focal_length_mm),
      sensor_w_(sensor_width_mm),
      sensor_h_(sensor_height_mm),
      width_(frame_width),
      height_(frame_height) {
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!positive(focal_) || !positive(sensor_w_) || !positive(sensor_h_) || width_ <= 0 ||
      height_ <= 0)
    throw Error(ErrorCode::InvalidArgument, "intrinsics must all be positive", "intrinsics");
  const double sensor_aspect = sensor_w_ / sensor_h_;
  const double frame_aspect = static_cast<double>(width_) / height_;
  if (std::abs(sensor_aspect - frame_aspect) > 1e-6)
    throw Error(ErrorCode::InvalidArgument, "sensor and frame aspect ratios differ", "intrinsics");
}

double CameraIntrinsics::diagonal() const {
  return std::hypot(static_cast<double>(width_), static_cast<double>(height_));
}

// ---------------------------------------------------------------------------
// Actor features

namespace {

template <typename Op>
PoseRows frame_differences(const ActorPoseSequence& seq, Op op) {
  const std::size_t joints = seq.joint_count();
  PoseRows rows(seq.size(), ActorPoseFrame{std::vector<DofVector>(joints)});
  for (std::size_t t = 1; t < seq.size(); ++t)
    for (std::size_t j = 0; j < joints; ++j)
      for (std::size_t a = 0; a < kDof; ++a)
        rows[t].joints[j][a] = op(seq[t].joints[j][a] - seq[t - 1].joints[j][a]);
  return rows;
}

}  // namespace

PoseRows compute_delta(const ActorPoseSequence& seq) {
  return frame_differences(seq, [](double d) { return std::abs(d); });
}

PoseRows compute_velocity(const ActorPoseSequence& seq) {
  const double fps = seq.fps();
  return frame_differences(seq, [fps](double d) { return d * fps; });
}

}  // namespace immcam
