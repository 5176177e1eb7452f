#include "immcam/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include "immcam/error.hpp"
#include "immcam/preview.hpp"
#include "immcam/projection.hpp"
#include "immcam/random.hpp"
#include "immcam/shakiness.hpp"

namespace immcam {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void bad_config(const std::string& message, const std::string& field) {
  throw Error(ErrorCode::InvalidArgument, message, field);
}

json dof_json(const DofVector& d) {
  json out = json::object();
  for (std::size_t a = 0; a < kDof; ++a) out[std::string(axis_name(a))] = d[a];
  return out;
}

json shake_json(const ShakinessVector& s) {
  json out = json::object();
  for (std::size_t a = 0; a < kDof; ++a) out[std::string(axis_name(a))] = s[a];
  out["total"] = s.sum();
  return out;
}

json saliency_json(const RegionSaliency& sal) {
  json out = json::object();
  for (std::size_t r = 0; r < kRegionCount; ++r) out[std::string(to_string(static_cast<Region>(r)))] = sal.weights[r];
  return out;
}

json dump_ready(const json& j) { return rounded(j); }

CameraPlacement frame_camera(const CameraTrajectory& traj, std::size_t t) { return CameraPlacement{traj.pose(t)}; }

ActorPoseFrame centered_frame(const Scene& s, std::size_t t) {
  return centered(s.sequence[t], actor_origin(s.sequence, s.layout));
}

void check_trajectory(const CameraTrajectory& traj, const Scene& s, const fs::path& path) {
  if (traj.size() != s.sequence.size())
    throw Error(ErrorCode::InvalidArgument,
                "trajectory has " + std::to_string(traj.size()) + " rows, scene has " +
                    std::to_string(s.sequence.size()) + " frames",
                path.string());
}

struct EmotionSweep {
  std::vector<double> emotions;
  std::vector<double> totals;
  std::optional<Correlations> corr;
  std::string error;
};

EmotionSweep emotion_sweep(const Scene& s, const RunConfig& config) {
  EmotionSweep sweep;
  const SynthesisConfig sc = config.synthesis_config();
  for (double e : config.emotion_grid) {
    const CameraTrajectory traj = synthesize(s.sequence, s.layout, EmotionFactor(e, s.emotion_max), s.camera, sc);
    sweep.emotions.push_back(e);
    sweep.totals.push_back(shakiness_vector(traj).sum());
  }
  try {
    sweep.corr = emotion_correlation(sweep.emotions, sweep.totals);
  } catch (const Error& e) {
    sweep.error = std::string(to_string(e.code())) + ": " + e.what();
  }
  return sweep;
}

json evaluation_json(const Scene& s, const CameraTrajectory& traj, const CameraPlacement& before,
                     const RunConfig& config) {
  const AestheticsConfig ac = config.aesthetics_config();
  const ActorPoseFrame pose0 = centered_frame(s, 0);
  const CameraPlacement after = frame_camera(traj, 0);

  SpatialSyncOptions sso;
  sso.position_only = config.hd_position_only;
  const SpatialSync sync = spatial_sync(s.sequence, traj, sso);
  const EmotionSweep sweep = emotion_sweep(s, config);
  const double rot = rot_shift(pose0, after, s.intrinsics, s.layout, ac);
  const double vis = vis_acc(pose0, before, after, s.intrinsics);

  const ImmersionReport r = immersion_score(sync.distance, sweep.corr.value_or(Correlations{}), rot, vis,
                                            config.alpha, config.beta, s.intrinsics.diagonal());
  json degenerate = json::array();
  for (std::size_t a = 0; a < kDof; ++a)
    if (sync.degenerate_actor[a] || sync.degenerate_camera[a]) degenerate.push_back(std::string(axis_name(a)));

  json out = {{"I_s", r.spatial},
              {"I_e", r.emotional},
              {"I_a", r.aesthetic},
              {"alpha", r.alpha},
              {"beta", r.beta},
              {"I", r.combined},
              {"raw", r.raw},
              {"degenerate_axes", degenerate},
              {"emotion_sweep", {{"emotions", sweep.emotions}, {"total_shakiness", sweep.totals}}},
              {"shakiness", shake_json(shakiness_vector(traj))}};
  if (!sweep.corr) {
    out["raw"]["pcc"] = nullptr;
    out["raw"]["srcc"] = nullptr;
    out["raw"]["krcc"] = nullptr;
    out["emotion_sweep"]["error"] = sweep.error;
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  auto nonneg = [](double x, const char* field) {
    if (!(x >= 0.0) || !std::isfinite(x)) bad_config("must be a finite value >= 0", field);
  };
  nonneg(aesthetics.lambda_cmp, "lambda_cmp");
  nonneg(aesthetics.lambda_adj, "lambda_adj");
  nonneg(aesthetics.lambda_vis, "lambda_vis");
  nonneg(trajectory.lambda_mse, "lambda_mse");
  nonneg(trajectory.lambda_sk, "lambda_sk");
  nonneg(alpha, "alpha");
  nonneg(beta, "beta");
  if (alpha + beta > 1.0) bad_config("alpha + beta must be <= 1", "alpha");
  nonneg(synthesis.kappa, "kappa");
  nonneg(synthesis.base_shake, "base_shake");
  if (synthesis.smooth_window < 1 || synthesis.smooth_window % 2 == 0)
    bad_config("smooth window must be odd and >= 1", "smooth_window");
  if (!(synthesis.shake_frequency_hz > 0.0)) bad_config("must be > 0", "shake_frequency");
  nonneg(aesthetics.position_bound, "bounds");
  nonneg(aesthetics.rotation_bound_deg, "bounds");
  if (aesthetics.starts < 1) bad_config("must be >= 1", "starts");
  if (aesthetics.max_evaluations < 1) bad_config("must be >= 1", "max_evaluations");
  for (double e : emotion_grid)
    if (!(e > 0.0)) bad_config("emotion must be positive", "emotion_grid");
}

SynthesisConfig RunConfig::synthesis_config() const {
  SynthesisConfig c = synthesis;
  c.seed = mix_seed(seed, 0x5e7);
  return c;
}

AestheticsConfig RunConfig::aesthetics_config() const {
  AestheticsConfig c = aesthetics;
  c.seed = mix_seed(seed, 0xae5);
  return c;
}

json rounded(const json& j) {
  if (j.is_number_float()) {
    const double x = j.get<double>();
    if (!std::isfinite(x)) return nullptr;
    return std::strtod(format_number(x).c_str(), nullptr);
  }
  if (j.is_array() || j.is_object()) {
    json out = j;
    for (auto it = out.begin(); it != out.end(); ++it) *it = rounded(*it);
    return out;
  }
  return j;
}

Scene load_scene_for(const fs::path& path, const RunConfig& config) {
  Scene s = load_scene(path);
  if (config.intrinsics) s.intrinsics = *config.intrinsics;
  return s;
}

json provenance(const std::string& command, const fs::path& scene_path, const RunConfig& config) {
  return {{"tool", "immcam"},
          {"version", kToolVersion},
          {"command", command},
          {"scene", scene_path.filename().string()},
          {"seed", config.seed},
          {"kappa", config.synthesis.kappa},
          {"base_shake", config.synthesis.base_shake},
          {"smooth_window", config.synthesis.smooth_window}};
}

json cmd_synthesize(const fs::path& scene_path, const RunConfig& config, const fs::path& out_csv) {
  config.validate();
  const Scene s = load_scene_for(scene_path, config);
  const SynthesisResult r = synthesize_detailed(s.sequence, s.layout, s.emotion, s.camera, config.synthesis_config());
  save_trajectory(r.trajectory, out_csv, rounded(provenance("synthesize", scene_path, config)));
  return dump_ready({{"frames", r.trajectory.size()},
                     {"fps", r.trajectory.fps},
                     {"emotion", s.emotion.value()},
                     {"saliency", saliency_json(r.saliency)},
                     {"target_shakiness", shake_json(r.profile.target)},
                     {"tracking_shakiness", shake_json(shakiness_vector(r.tracking))},
                     {"shakiness", shake_json(shakiness_vector(r.trajectory))},
                     {"output", out_csv.filename().string()}});
}

json cmd_adjust(const fs::path& scene_path, const fs::path& traj_path, const RunConfig& config,
                const fs::path& out_csv) {
  config.validate();
  const Scene s = load_scene_for(scene_path, config);
  const CameraTrajectory traj = load_trajectory(traj_path, s.sequence.fps());
  check_trajectory(traj, s, traj_path);
  const AestheticsConfig ac = config.aesthetics_config();
  const ActorPoseFrame pose0 = centered_frame(s, 0);
  const CameraPlacement before = frame_camera(traj, 0);

  const Adjustment adj = adjust(pose0, before, s.intrinsics, s.layout, ac);
  const CameraTrajectory out = apply_offset(traj, adj.offset);
  const CameraPlacement after = frame_camera(out, 0);
  save_trajectory(out, out_csv, rounded(provenance("adjust", scene_path, config)));
  return dump_ready({{"offset", dof_json(adj.offset)},
                     {"loss_before", adj.loss_at_zero},
                     {"loss_after", adj.loss},
                     {"evaluations", adj.evaluations},
                     {"rot_shift_before", rot_shift(pose0, before, s.intrinsics, s.layout, ac)},
                     {"rot_shift_after", rot_shift(pose0, after, s.intrinsics, s.layout, ac)},
                     {"adj_dis", adj_dis(before, after)},
                     {"vis_acc", vis_acc(pose0, before, after, s.intrinsics)},
                     {"output", out_csv.filename().string()}});
}

json cmd_evaluate(const fs::path& scene_path, const fs::path& traj_path, const std::optional<fs::path>& reference_path,
                  const RunConfig& config) {
  config.validate();
  const Scene s = load_scene_for(scene_path, config);
  const CameraTrajectory traj = load_trajectory(traj_path, s.sequence.fps());
  check_trajectory(traj, s, traj_path);
  json report = evaluation_json(s, traj, s.camera, config);
  if (reference_path) {
    const CameraTrajectory ref = load_trajectory(*reference_path, s.sequence.fps());
    check_trajectory(ref, s, *reference_path);
    const ShakinessVector a = shakiness_vector(ref);
    const ShakinessVector b = shakiness_vector(traj);
    json cmp = {{"point_loss", point_loss(ref, traj)},
                {"shakiness_distance", shakiness_distance(a, b)},
                {"objective", combined_trajectory_objective(ref, traj, config.trajectory)}};
    if (!a.is_zero() && !b.is_zero()) {
      cmp["cosine_shakiness_distance"] = cosine_shakiness_distance(a, b);
    } else {
      cmp["cosine_shakiness_distance"] = nullptr;
    }
    report["reference"] = cmp;
  }
  return dump_ready(report);
}

json cmd_project(const fs::path& scene_path, const std::optional<fs::path>& traj_path, std::size_t frame,
                 const RunConfig& config, const std::optional<fs::path>& svg_out) {
  config.validate();
  const Scene s = load_scene_for(scene_path, config);
  if (frame >= s.sequence.size())
    throw Error(ErrorCode::InvalidArgument, "frame index out of range", "frame=" + std::to_string(frame));
  CameraPlacement cam = s.camera;
  if (traj_path) {
    const CameraTrajectory traj = load_trajectory(*traj_path, s.sequence.fps());
    check_trajectory(traj, s, *traj_path);
    cam = frame_camera(traj, frame);
  }
  const AestheticsConfig ac = config.aesthetics_config();
  const ActorPoseFrame pose = centered_frame(s, frame);
  const ProjectedPose pp = project_pose(pose, cam, s.intrinsics);

  json joints = json::array();
  for (std::size_t j = 0; j < pp.points.size(); ++j) {
    const ShotPoint& p = pp.points[j];
    joints.push_back({{"joint", s.layout.joint_names()[j]},
                      {"u", p.u},
                      {"v", p.v},
                      {"depth", p.depth},
                      {"on_frame", p.on_frame},
                      {"encoded", {pp.encoded[j].x(), pp.encoded[j].y()}}});
  }
  json out = {{"frame", frame},
              {"camera", dof_json(cam.pose)},
              {"frame_size", {s.intrinsics.frame_width(), s.intrinsics.frame_height()}},
              {"joints", joints},
              {"visible", pp.on_frame_count()}};
  if (pp.on_frame_count() > 0) {
    const Eigen::Vector2d c = body_center(pp, s.layout, ac.body_center_sigma);
    out["body_center"] = {c.x(), c.y()};
    out["rot_shift"] = rot_shift(pose, cam, s.intrinsics, s.layout, ac);
  } else {
    out["body_center"] = nullptr;
    out["rot_shift"] = nullptr;
  }
  if (svg_out) write_text(*svg_out, shot_svg(pose, cam, s.intrinsics, s.layout, ac, "frame " + std::to_string(frame)));
  return dump_ready(out);
}

json cmd_shakeprofile(const fs::path& traj_path, double fallback_fps) {
  const CameraTrajectory traj = load_trajectory(traj_path, fallback_fps);
  json stationary = json::object();
  for (std::size_t a = 0; a < kDof; ++a)
    stationary[std::string(axis_name(a))] = stationary_points(axis_series(traj, a)).indices;
  return dump_ready({{"frames", traj.size()},
                     {"fps", traj.fps},
                     {"shakiness", shake_json(shakiness_vector(traj))},
                     {"stationary_points", stationary}});
}

std::vector<fs::path> cmd_preview(const fs::path& scene_path, const fs::path& traj_path,
                                  const std::vector<std::size_t>& frames, const fs::path& out_dir,
                                  const RunConfig& config) {
  config.validate();
  const Scene s = load_scene_for(scene_path, config);
  const CameraTrajectory traj = load_trajectory(traj_path, s.sequence.fps());
  check_trajectory(traj, s, traj_path);
  const AestheticsConfig ac = config.aesthetics_config();
  std::vector<fs::path> written;
  for (std::size_t t : frames) {
    if (t >= traj.size())
      throw Error(ErrorCode::InvalidArgument, "frame index out of range", "frame=" + std::to_string(t));
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04zu.svg", t);
    const fs::path out = out_dir / name;
    write_text(out, shot_svg(centered_frame(s, t), frame_camera(traj, t), s.intrinsics, s.layout, ac,
                             "frame " + std::to_string(t)));
    written.push_back(out);
  }
  return written;
}

json cmd_pipeline(const fs::path& scene_path, const RunConfig& config, const fs::path& out_dir) {
  config.validate();
  const Scene s = load_scene_for(scene_path, config);
  const AestheticsConfig ac = config.aesthetics_config();

  const SynthesisResult syn = synthesize_detailed(s.sequence, s.layout, s.emotion, s.camera, config.synthesis_config());
  const ActorPoseFrame pose0 = centered_frame(s, 0);
  const CameraPlacement before = frame_camera(syn.trajectory, 0);
  const Adjustment adj = adjust(pose0, before, s.intrinsics, s.layout, ac);
  const CameraTrajectory final_traj = apply_offset(syn.trajectory, adj.offset);
  const CameraPlacement after = frame_camera(final_traj, 0);

  const fs::path csv = out_dir / "trajectory.csv";
  const fs::path svg = out_dir / "preview_0000.svg";
  const fs::path report_path = out_dir / "report.json";
  save_trajectory(final_traj, csv, rounded(provenance("pipeline", scene_path, config)));
  write_text(svg, shot_svg(pose0, after, s.intrinsics, s.layout, ac, "frame 0"));

  json report = {
      {"scene", scene_path.filename().string()},
      {"seed", config.seed},
      {"emotion", s.emotion.value()},
      {"frames", final_traj.size()},
      {"synthesis",
       {{"saliency", saliency_json(syn.saliency)},
        {"target_shakiness", shake_json(syn.profile.target)},
        {"tracking_shakiness", shake_json(shakiness_vector(syn.tracking))},
        {"shakiness", shake_json(shakiness_vector(syn.trajectory))}}},
      {"adjustment",
       {{"offset", dof_json(adj.offset)},
        {"loss_before", adj.loss_at_zero},
        {"loss_after", adj.loss},
        {"evaluations", adj.evaluations},
        {"rot_shift_before", rot_shift(pose0, before, s.intrinsics, s.layout, ac)},
        {"rot_shift_after", rot_shift(pose0, after, s.intrinsics, s.layout, ac)},
        {"adj_dis", adj_dis(before, after)},
        {"vis_acc", vis_acc(pose0, before, after, s.intrinsics)}}},
      {"immersion", evaluation_json(s, final_traj, before, config)},
      {"outputs", {{"trajectory", csv.filename().string()}, {"preview", svg.filename().string()}}}};
  report = dump_ready(report);
  write_text(report_path, report.dump(2) + "\n");
  return report;
}

std::vector<fs::path> batch_scenes(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::Io, "not a directory", dir.string());
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

json run_batch(const fs::path& dir, const fs::path& out_dir,
               const std::function<json(const fs::path&, const fs::path&)>& job, unsigned workers) {
  const std::vector<fs::path> scenes = batch_scenes(dir);
  std::vector<json> results(scenes.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < scenes.size(); i = next++) {
      const fs::path sub = out_dir / scenes[i].stem();
      try {
        results[i] = {{"scene", scenes[i].filename().string()}, {"ok", true}, {"result", job(scenes[i], sub)}};
      } catch (const Error& e) {
        results[i] = {{"scene", scenes[i].filename().string()},
                      {"ok", false},
                      {"error", error_json(std::string(to_string(e.code())), e.what(), e.context())}};
      } catch (const std::exception& e) {
        results[i] = {{"scene", scenes[i].filename().string()},
                      {"ok", false},
                      {"error", error_json("internal", e.what(), "")}};
      }
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, scenes.size()))));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return json{{"scenes", results}};
}

json error_json(const std::string& code, const std::string& message, const std::string& context) {
  return {{"code", code}, {"message", message}, {"context", context}};
}

}  // namespace immcam
