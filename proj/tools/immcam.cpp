// immcam: command-line front end.
//
//   immcam synthesize scene.json -o traj.csv
//   immcam adjust scene.json traj.csv -o adjusted.csv
//   immcam evaluate scene.json adjusted.csv [--reference ref.csv]
//   immcam project scene.json [--trajectory traj.csv] [--frame N] [--svg out.svg]
//   immcam shakeprofile traj.csv
//   immcam preview scene.json traj.csv --frames 0 10 -o previews/
//   immcam pipeline scene.json -o outdir/        (or --batch scenes/ -o outdir/)
//
// Results go to stdout as JSON; errors go to stderr as {code, message, context}
// with a nonzero exit status.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "immcam/commands.hpp"
#include "immcam/error.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int fail(const std::string& code, const std::string& message, const std::string& context) {
  std::cerr << immcam::error_json(code, message, context).dump() << "\n";
  return 1;
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Immersive virtual camera trajectories: synthesis, framing and evaluation", "immcam"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Read options from an INI/TOML file");

  immcam::RunConfig cfg;
  std::vector<double> bounds;
  std::vector<double> intrinsics;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

  app.add_option("--seed", cfg.seed, "Random seed")->envname("IMMCAM_SEED");
  app.add_option("--kappa", cfg.synthesis.kappa, "Emotion exponent for the shake target");
  app.add_option("--base-shake", cfg.synthesis.base_shake, "Shakiness per second of footage at E = 1");
  app.add_option("--smooth-window", cfg.synthesis.smooth_window, "Tracking smoothing window (odd, frames)");
  app.add_option("--shake-frequency", cfg.synthesis.shake_frequency_hz, "Dominant shake frequency (Hz)");
  app.add_option("--lambda-cmp", cfg.aesthetics.lambda_cmp, "Composition loss weight");
  app.add_option("--lambda-adj", cfg.aesthetics.lambda_adj, "Adjustment loss weight");
  app.add_option("--lambda-vis", cfg.aesthetics.lambda_vis, "Visibility loss weight");
  app.add_option("--lambda-mse", cfg.trajectory.lambda_mse, "Point loss weight");
  app.add_option("--lambda-sk", cfg.trajectory.lambda_sk, "Shakiness loss weight");
  app.add_option("--alpha", cfg.alpha, "Spatial immersion weight");
  app.add_option("--beta", cfg.beta, "Emotional immersion weight");
  app.add_option("--bounds", bounds, "Adjustment box: metres degrees")->expected(2);
  app.add_option("--starts", cfg.aesthetics.starts, "Optimiser starts");
  app.add_option("--max-evaluations", cfg.aesthetics.max_evaluations, "Loss evaluations per start");
  app.add_option("--tolerance", cfg.aesthetics.diameter_tolerance, "Simplex diameter tolerance");
  app.add_option("--intrinsics", intrinsics, "focal_mm sensor_w_mm sensor_h_mm width height")->expected(5);
  app.add_option("--emotion-grid", cfg.emotion_grid, "Emotion factors swept for the emotional score");
  app.add_flag("--hd-position-only", cfg.hd_position_only, "Spatial sync on position axes only");

  std::string scene, trajectory, output, batch, reference, svg;
  std::size_t frame = 0;
  double fps = 30.0;
  std::vector<std::size_t> frames{0};

  auto* syn = app.add_subcommand("synthesize", "Scene to camera trajectory CSV");
  syn->add_option("scene", scene, "Scene file");
  syn->add_option("-o,--out", output, "Output CSV (or directory with --batch)")->required();
  syn->add_option("--batch", batch, "Directory of scene files");
  syn->add_option("--jobs", jobs, "Concurrent scenes in batch mode");

  auto* adj = app.add_subcommand("adjust", "Rule-of-thirds offset for a trajectory");
  adj->add_option("scene", scene, "Scene file")->required();
  adj->add_option("trajectory", trajectory, "Trajectory CSV")->required();
  adj->add_option("-o,--out", output, "Adjusted trajectory CSV")->required();

  auto* eval = app.add_subcommand("evaluate", "Immersion report for a trajectory");
  eval->add_option("scene", scene, "Scene file")->required();
  eval->add_option("trajectory", trajectory, "Trajectory CSV")->required();
  eval->add_option("--reference", reference, "Reference trajectory CSV");

  auto* proj = app.add_subcommand("project", "Project one frame into the shot");
  proj->add_option("scene", scene, "Scene file")->required();
  proj->add_option("--trajectory", trajectory, "Use this trajectory's camera");
  proj->add_option("--frame", frame, "Frame index");
  proj->add_option("--svg", svg, "Write an SVG overlay");

  auto* shake = app.add_subcommand("shakeprofile", "Shakiness vector and stationary points");
  shake->add_option("trajectory", trajectory, "Trajectory CSV")->required();
  shake->add_option("--fps", fps, "Frame rate when the sidecar is missing");

  auto* prev = app.add_subcommand("preview", "SVG previews of trajectory frames");
  prev->add_option("scene", scene, "Scene file")->required();
  prev->add_option("trajectory", trajectory, "Trajectory CSV")->required();
  prev->add_option("--frames", frames, "Frame indices");
  prev->add_option("-o,--out", output, "Output directory")->required();

  auto* pipe = app.add_subcommand("pipeline", "synthesize, adjust and evaluate");
  pipe->add_option("scene", scene, "Scene file");
  pipe->add_option("-o,--out", output, "Output directory")->required();
  pipe->add_option("--batch", batch, "Directory of scene files");
  pipe->add_option("--jobs", jobs, "Concurrent scenes in batch mode");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail("usage", e.what(), "");
  }

  try {
    if (!bounds.empty()) {
      cfg.aesthetics.position_bound = bounds[0];
      cfg.aesthetics.rotation_bound_deg = bounds[1];
    }
    if (!intrinsics.empty())
      cfg.intrinsics = immcam::CameraIntrinsics(intrinsics[0], intrinsics[1], intrinsics[2],
                                                static_cast<int>(intrinsics[3]), static_cast<int>(intrinsics[4]));
    cfg.validate();

    auto need_scene = [&] {
      if (scene.empty()) throw immcam::Error(immcam::ErrorCode::InvalidArgument, "a scene file is required", "scene");
    };

    if (*syn) {
      if (!batch.empty()) {
        print(immcam::run_batch(
            batch, output,
            [&](const fs::path& s, const fs::path& dir) { return immcam::cmd_synthesize(s, cfg, dir / "trajectory.csv"); },
            jobs));
      } else {
        need_scene();
        print(immcam::cmd_synthesize(scene, cfg, output));
      }
    } else if (*adj) {
      print(immcam::cmd_adjust(scene, trajectory, cfg, output));
    } else if (*eval) {
      std::optional<fs::path> ref;
      if (!reference.empty()) ref = reference;
      print(immcam::cmd_evaluate(scene, trajectory, ref, cfg));
    } else if (*proj) {
      std::optional<fs::path> traj, svg_out;
      if (!trajectory.empty()) traj = trajectory;
      if (!svg.empty()) svg_out = svg;
      print(immcam::cmd_project(scene, traj, frame, cfg, svg_out));
    } else if (*shake) {
      print(immcam::cmd_shakeprofile(trajectory, fps));
    } else if (*prev) {
      json written = json::array();
      for (const auto& p : immcam::cmd_preview(scene, trajectory, frames, output, cfg))
        written.push_back(p.filename().string());
      print(json{{"written", written}});
    } else if (*pipe) {
      if (!batch.empty()) {
        print(immcam::run_batch(
            batch, output,
            [&](const fs::path& s, const fs::path& dir) { return immcam::cmd_pipeline(s, cfg, dir); }, jobs));
      } else {
        need_scene();
        print(immcam::cmd_pipeline(scene, cfg, output));
      }
    }
  } catch (const immcam::Error& e) {
    return fail(std::string(immcam::to_string(e.code())), e.what(), e.context());
  } catch (const std::exception& e) {
    return fail("internal", e.what(), "");
  }
  return 0;
}
