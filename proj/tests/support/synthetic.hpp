#pragma once

// Deterministic synthetic scenes: a small pose library, sphere-sampled
// cameras around each pose, and motion sequences with uneven speed.

#include <cstdint>
#include <vector>

#include "immcam/random.hpp"
#include "immcam/scene.hpp"
#include "immcam/scene_io.hpp"

namespace immcam::testing {

inline constexpr std::size_t kPoseCount = 10;

/// Pose `i` of the library (world frame, pelvis near the origin). Poses 7-9
/// are lying down; the rest are upright.
ActorPoseFrame library_pose(std::size_t i);

/// Rotates all joint positions about the vertical axis through the pelvis and
/// adds `yaw` to every joint's yaw.
ActorPoseFrame turned(const ActorPoseFrame& frame, double yaw);

struct FramingCase {
  ActorPoseFrame pose;  // actor-centred
  CameraPlacement camera;
  std::size_t pose_index = 0;
};

/// Camera on a sphere (radius 2.5, 3.5 or 5 m; elevation -10..45 deg) around
/// the actor, aimed at the torso with a few degrees of jitter. Cases giving a
/// blank shot are redrawn.
FramingCase sphere_case(std::size_t pose_index, Rng& rng, const CameraIntrinsics& intr = {});

/// `count` framing cases cycling through the pose library.
std::vector<FramingCase> framing_suite(std::size_t count, std::uint64_t seed);

enum class MotionKind { Walk, Sprint, Dance, Sidestep, Jump, Turn };
inline constexpr std::size_t kMotionKinds = 6;

/// Motion sequence of `frames` frames at `fps`; speed varies over time.
ActorPoseSequence motion_sequence(MotionKind kind, std::size_t frames, double fps, std::uint64_t seed);

/// Camera aimed at the actor from `distance` metres at the given azimuth
/// (radians, 0 = in front of the actor) in the actor-centred frame.
CameraPlacement facing_camera(const ActorPoseSequence& seq, const SkeletonLayout& layout, double azimuth,
                              double distance, double height = 0.3);

/// Scene `i` of the motion suite.
Scene motion_scene(std::size_t i, double emotion, std::uint64_t seed);

}  // namespace immcam::testing
