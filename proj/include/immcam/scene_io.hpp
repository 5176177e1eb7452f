#pragma once

// Scene files (JSON) and trajectory files (CSV plus a JSON sidecar).
//
// Scene file keys:
//   skeleton    "default" or {joint_names, regions: {joint: region}, parents,
//               indices: {torso_center, head, pelvis}, actor_height}
//   frames      T arrays of J arrays of 6 numbers (x, y, z, yaw, pitch, roll),
//               world frame, radians
//   fps         frames per second
//   emotion     E > 0 (optional "emotion_max", default 4)
//   camera      {pose: 6 numbers in the actor-centred frame, angle_unit: "rad" | "deg"}
//   intrinsics  optional {focal_length_mm, sensor_width_mm, sensor_height_mm,
//               frame_width, frame_height}

#include <filesystem>
#include <string>

#include "json.hpp"

#include "immcam/scene.hpp"

namespace immcam {

struct Scene {
  SkeletonLayout layout;
  ActorPoseSequence sequence;
  EmotionFactor emotion;
  CameraPlacement camera;
  CameraIntrinsics intrinsics;
  bool default_skeleton = false;
  double emotion_max = kDefaultEmotionMax;

  bool operator==(const Scene&) const = default;
};

/// Throws `Error{Parse}` naming the offending field, frame or joint.
Scene scene_from_json(const nlohmann::json& doc);
nlohmann::json scene_to_json(const Scene& scene);

Scene load_scene(const std::filesystem::path& path);
void save_scene(const Scene& scene, const std::filesystem::path& path);

/// Header `t,x,y,z,yaw,pitch,roll`; t in seconds, angles in radians.
std::string trajectory_to_csv(const CameraTrajectory& traj);
CameraTrajectory trajectory_from_csv(const std::string& text, double fps);

/// `<path>.json` next to the CSV.
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

/// Writes the CSV and its sidecar ({fps, frames, provenance}).
void save_trajectory(const CameraTrajectory& traj, const std::filesystem::path& path,
                     const nlohmann::json& provenance);

/// Reads fps from the sidecar when present, otherwise uses `fallback_fps`.
CameraTrajectory load_trajectory(const std::filesystem::path& path, double fallback_fps);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

/// printf("%.9g").
std::string format_number(double x);

}  // namespace immcam
