#pragma once

// Library side of the command-line tool: run configuration and one function
// per subcommand. Every command is deterministic given its inputs and seed.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "immcam/aesthetics.hpp"
#include "immcam/evaluation.hpp"
#include "immcam/scene.hpp"
#include "immcam/scene_io.hpp"
#include "immcam/synthesis.hpp"

namespace immcam {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunConfig {
  std::uint64_t seed = 0;
  SynthesisConfig synthesis;
  AestheticsConfig aesthetics;
  TrajectoryWeights trajectory;
  double alpha = 1.0 / 3.0;
  double beta = 1.0 / 3.0;
  /// Emotion factors the synthesizer is swept over to score emotional
  /// immersion.
  std::vector<double> emotion_grid{0.5, 0.75, 1.0, 1.5, 2.0};
  bool hd_position_only = false;
  std::optional<CameraIntrinsics> intrinsics;

  /// Throws `Error{InvalidArgument}` naming the first bad field.
  void validate() const;
  /// Copies of the stage configs with the run seed folded in.
  SynthesisConfig synthesis_config() const;
  AestheticsConfig aesthetics_config() const;
};

/// Rounds every floating-point value in `j` to 9 significant digits.
nlohmann::json rounded(const nlohmann::json& j);

/// Loads a scene and applies the intrinsics override, if any.
Scene load_scene_for(const std::filesystem::path& path, const RunConfig& config);

nlohmann::json provenance(const std::string& command, const std::filesystem::path& scene_path,
                          const RunConfig& config);

nlohmann::json cmd_synthesize(const std::filesystem::path& scene_path, const RunConfig& config,
                              const std::filesystem::path& out_csv);

nlohmann::json cmd_adjust(const std::filesystem::path& scene_path, const std::filesystem::path& traj_path,
                          const RunConfig& config, const std::filesystem::path& out_csv);

nlohmann::json cmd_evaluate(const std::filesystem::path& scene_path, const std::filesystem::path& traj_path,
                            const std::optional<std::filesystem::path>& reference_path, const RunConfig& config);

/// Projects frame `frame` with the scene camera, or with the trajectory's
/// camera at that frame when `traj_path` is given. Writes an SVG when
/// `svg_out` is given.
nlohmann::json cmd_project(const std::filesystem::path& scene_path,
                           const std::optional<std::filesystem::path>& traj_path, std::size_t frame,
                           const RunConfig& config, const std::optional<std::filesystem::path>& svg_out);

nlohmann::json cmd_shakeprofile(const std::filesystem::path& traj_path, double fallback_fps);

/// Writes `frame_NNNN.svg` per requested frame; returns the paths written.
std::vector<std::filesystem::path> cmd_preview(const std::filesystem::path& scene_path,
                                               const std::filesystem::path& traj_path,
                                               const std::vector<std::size_t>& frames,
                                               const std::filesystem::path& out_dir, const RunConfig& config);

/// synthesize -> adjust -> apply_offset -> evaluate. Writes trajectory.csv
/// (+ sidecar), report.json and preview_0000.svg into `out_dir`.
nlohmann::json cmd_pipeline(const std::filesystem::path& scene_path, const RunConfig& config,
                            const std::filesystem::path& out_dir);

/// Scene files (*.json) directly inside `dir`, sorted by name.
std::vector<std::filesystem::path> batch_scenes(const std::filesystem::path& dir);

/// Runs `job(scene, out_subdir)` for every scene, concurrently, and collects
/// per-scene results (or error objects) in sorted scene order.
nlohmann::json run_batch(const std::filesystem::path& dir, const std::filesystem::path& out_dir,
                         const std::function<nlohmann::json(const std::filesystem::path&,
                                                            const std::filesystem::path&)>& job,
                         unsigned workers);

nlohmann::json error_json(const std::string& code, const std::string& message, const std::string& context);

}  // namespace immcam
