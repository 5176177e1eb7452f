#include "immcam/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <tuple>

#include "immcam/error.hpp"
#include "immcam/projection.hpp"
#include "immcam/random.hpp"

namespace immcam {

RegionSaliency softmax_saliency(const std::array<double, kRegionCount>& energies, double temperature,
                                const std::array<bool, kRegionCount>& present) {
  if (!(temperature > 0.0))
    throw Error(ErrorCode::InvalidArgument, "saliency temperature must be positive", "temperature");
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < kRegionCount; ++r)
    if (present[r]) peak = std::max(peak, energies[r] / temperature);
  RegionSaliency sal;
  double total = 0.0;
  for (std::size_t r = 0; r < kRegionCount; ++r) {
    sal.weights[r] = present[r] ? std::exp(energies[r] / temperature - peak) : 0.0;
    total += sal.weights[r];
  }
  for (auto& w : sal.weights) w /= total;
  return sal;
}

std::array<double, kRegionCount> region_energies(const PoseRows& deltas, const SkeletonLayout& layout) {
  std::array<double, kRegionCount> sum{};
  std::array<std::size_t, kRegionCount> count{};
  for (std::size_t t = 1; t < deltas.size(); ++t) {
    for (std::size_t j = 0; j < layout.size(); ++j) {
      const auto r = static_cast<std::size_t>(layout.region_of(j));
      const auto& d = deltas[t].joints[j];
      sum[r] += d[kX] + d[kY] + d[kZ];
      count[r] += 3;
    }
  }
  std::array<double, kRegionCount> energy{};
  for (std::size_t r = 0; r < kRegionCount; ++r) energy[r] = count[r] ? sum[r] / count[r] : 0.0;
  return energy;
}

namespace {

std::array<bool, kRegionCount> regions_present(const SkeletonLayout& layout) {
  std::array<bool, kRegionCount> present{};
  for (Region r : layout.regions()) present[static_cast<std::size_t>(r)] = true;
  return present;
}

}  // namespace

RegionSaliency region_saliency(const PoseRows& deltas, const SkeletonLayout& layout, double temperature) {
  if (deltas.size() < 2)
    throw Error(ErrorCode::InvalidSequence, "T >= 2 required", "region_saliency");
  return softmax_saliency(region_energies(deltas, layout), temperature, regions_present(layout));
}

Eigen::Vector3d saliency_target(const ActorPoseFrame& frame, const SkeletonLayout& layout,
                                const RegionSaliency& sal) {
  std::array<Eigen::Vector3d, kRegionCount> centroid;
  std::array<int, kRegionCount> count{};
  centroid.fill(Eigen::Vector3d::Zero());
  for (std::size_t j = 0; j < layout.size(); ++j) {
    const auto r = static_cast<std::size_t>(layout.region_of(j));
    centroid[r] += frame.joints[j].position();
    ++count[r];
  }
  Eigen::Vector3d target = Eigen::Vector3d::Zero();
  double total = 0.0;
  for (std::size_t r = 0; r < kRegionCount; ++r) {
    if (count[r] == 0) continue;
    target += sal.weights[r] * centroid[r] / count[r];
    total += sal.weights[r];
  }
  return total > 0.0 ? Eigen::Vector3d(target / total) : target;
}

std::vector<Eigen::Vector3d> centered_moving_average(std::span<const Eigen::Vector3d> xs, int window) {
  if (window < 1 || window % 2 == 0)
    throw Error(ErrorCode::InvalidArgument, "smooth_window must be odd and >= 1", "smooth_window");
  const auto n = static_cast<std::ptrdiff_t>(xs.size());
  const std::ptrdiff_t half = window / 2;
  std::vector<Eigen::Vector3d> out(xs.size());
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    const std::ptrdiff_t h = std::min({half, t, n - 1 - t});
    Eigen::Vector3d acc = Eigen::Vector3d::Zero();
    for (std::ptrdiff_t k = t - h; k <= t + h; ++k) acc += xs[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(t)] = acc / static_cast<double>(2 * h + 1);
  }
  return out;
}

void unwrap_angles(std::vector<double>& angles) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 1; i < angles.size(); ++i) {
    const double d = angles[i] - angles[i - 1];
    angles[i] -= two_pi * std::round(d / two_pi);
  }
}

CameraTrajectory tracking_trajectory(const ActorPoseSequence& seq, const SkeletonLayout& layout,
                                     const CameraPlacement& c0, const RegionSaliency& sal,
                                     int smooth_window) {
  const Eigen::Vector3d origin = actor_origin(seq, layout);
  const std::size_t n = seq.size();

  std::vector<Eigen::Vector3d> targets;
  targets.reserve(n);
  for (const auto& frame : seq.frames()) targets.push_back(saliency_target(centered(frame, origin), layout, sal));

  const Eigen::Vector3d offset = c0.pose.position() - targets.front();
  const std::vector<Eigen::Vector3d> smoothed = centered_moving_average(targets, smooth_window);

  std::vector<double> yaws(n), pitches(n);
  std::vector<Eigen::Vector3d> positions(n);
  for (std::size_t t = 0; t < n; ++t) {
    positions[t] = smoothed[t] + offset;
    std::tie(yaws[t], pitches[t]) = look_at_angles(positions[t], targets[t]);
  }
  unwrap_angles(yaws);

  CameraTrajectory traj;
  traj.fps = seq.fps();
  traj.placements.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    DofVector& p = traj.placements[t];
    p.set_position(positions[t]);
    p[kYaw] = c0.pose.yaw() + (yaws[t] - yaws[0]);
    p[kPitch] = c0.pose.pitch() + (pitches[t] - pitches[0]);
    p[kRoll] = c0.pose.roll();
  }
  traj.placements[0] = c0.pose;
  return traj;
}

ShakinessVector target_shakiness(const EmotionFactor& e, const ShakinessVector& base, double kappa) {
  if (!(kappa > 0.0)) throw Error(ErrorCode::InvalidArgument, "kappa must be positive", "kappa");
  const double g = std::pow(e.value(), kappa);
  ShakinessVector out;
  for (std::size_t a = 0; a < kDof; ++a) {
    if (base[a] < 0.0)
      throw Error(ErrorCode::InvalidArgument, "base shakiness must be nonnegative",
                  std::string(axis_name(a)));
    out[a] = base[a] * g;
  }
  return out;
}

std::vector<double> unit_perturbation(std::size_t frames, double fps, double frequency_hz,
                                      std::uint64_t seed, std::size_t axis, int draw) {
  // Keep the highest component below ~0.3 fps so each cycle spans >3 frames.
  const double max_ratio = *std::max_element(kShakeFrequencyRatios.begin(), kShakeFrequencyRatios.end());
  const double f0 = std::min(frequency_hz, 0.3 * fps / max_ratio);

  Rng rng(mix_seed(seed, axis * 1024 + static_cast<std::uint64_t>(draw)));
  std::array<double, 3> phase{};
  for (auto& ph : phase) ph = rng.uniform(0.0, 2.0 * std::numbers::pi);

  std::vector<double> s(frames, 0.0);
  for (std::size_t t = 0; t < frames; ++t) {
    const double time = static_cast<double>(t) / fps;
    for (std::size_t k = 0; k < 3; ++k)
      s[t] += kShakeWeights[k] *
              std::sin(2.0 * std::numbers::pi * f0 * kShakeFrequencyRatios[k] * time + phase[k]);
  }
  double mean = 0.0;
  for (double x : s) mean += x;
  mean /= static_cast<double>(frames);
  double peak = 0.0;
  for (double& x : s) {
    x -= mean;
    peak = std::max(peak, std::abs(x));
  }
  if (peak > 0.0)
    for (double& x : s) x /= peak;
  return s;
}

namespace {

struct AxisCalibration {
  std::vector<double> values;
  double achieved = 0.0;
  bool converged = false;
};

AxisCalibration calibrate_axis(const std::vector<double>& base, double target, double fps,
                               const ShakeProfile& profile, std::size_t axis,
                               const ShakeOptions& options) {
  AxisCalibration result;
  result.values = base;
  const double tol = options.tolerance * target;
  const double m0 = axis_shakiness(base);
  result.achieved = m0;
  if (std::abs(m0 - target) <= tol) {
    result.converged = true;
    return result;
  }
  if (m0 > target) return result;  // adding shake cannot lower the measure

  std::vector<double> trial(base.size());
  auto measure = [&](const std::vector<double>& s, double amp) {
    for (std::size_t t = 0; t < base.size(); ++t) trial[t] = base[t] + amp * s[t];
    return axis_shakiness(trial);
  };
  auto keep_if_better = [&](double m) {
    if (std::abs(m - target) < std::abs(result.achieved - target)) {
      result.values = trial;
      result.achieved = m;
    }
  };

  // The measure only counts extrema, so on a drifting axis it jumps whenever
  // a new reversal appears and is not monotone in the amplitude. Each draw
  // scans amplitudes geometrically, then bisects every bracket that straddles
  // the target; draws shift the dominant frequency and phases.
  const std::size_t scan_points =
      static_cast<std::size_t>(std::ceil(std::log(kScanSpan * kScanSpan) / std::log(kScanRatio)));
  std::vector<double> amps(scan_points + 1), ms(scan_points + 1);
  for (int draw = 0; draw < options.max_draws; ++draw) {
    const double scale =
        kDrawFrequencyScale[static_cast<std::size_t>(draw) % kDrawFrequencyScale.size()];
    const std::vector<double> s =
        unit_perturbation(base.size(), fps, profile.frequency_hz * scale, profile.seed, axis, draw);
    const double unit = std::max(axis_shakiness(s), 1e-12);
    const double guess = (target - m0) / unit;

    for (std::size_t k = 0; k <= scan_points; ++k) {
      amps[k] = guess / kScanSpan * std::pow(kScanRatio, static_cast<double>(k));
      ms[k] = measure(s, amps[k]);
      keep_if_better(ms[k]);
      if (std::abs(ms[k] - target) <= tol) {
        result.values = trial;
        result.achieved = ms[k];
        result.converged = true;
        return result;
      }
    }
    for (std::size_t k = 0; k < scan_points; ++k) {
      if ((ms[k] < target) == (ms[k + 1] < target)) continue;
      double lo = amps[k], hi = amps[k + 1];
      const bool rising = ms[k] < target;
      for (int it = 0; it < options.max_iterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double m = measure(s, mid);
        keep_if_better(m);
        if (std::abs(m - target) <= tol) {
          result.values = trial;
          result.achieved = m;
          result.converged = true;
          return result;
        }
        ((m < target) == rising ? lo : hi) = mid;
      }
    }
  }
  return result;
}

}  // namespace

CameraTrajectory inject_shake(const CameraTrajectory& traj, const ShakeProfile& profile,
                              const ShakeOptions& options) {
  if (!(profile.frequency_hz > 0.0))
    throw Error(ErrorCode::InvalidArgument, "shake frequency must be positive", "frequency_hz");
  for (std::size_t a = 0; a < kDof; ++a)
    if (!(profile.target[a] >= 0.0))
      throw Error(ErrorCode::InvalidArgument, "shake targets must be nonnegative",
                  std::string(axis_name(a)));
  if (profile.target.is_zero() || traj.size() < 3) return traj;

  CameraTrajectory out = traj;
  ShakinessVector achieved;
  bool ok = true;
  for (std::size_t a = 0; a < kDof; ++a) {
    const std::vector<double> base = axis_series(traj, a);
    if (profile.target[a] == 0.0) {
      achieved[a] = axis_shakiness(base);
      continue;
    }
    AxisCalibration cal = calibrate_axis(base, profile.target[a], traj.fps, profile, a, options);
    achieved[a] = cal.achieved;
    ok = ok && cal.converged;
    for (std::size_t t = 0; t < out.size(); ++t) out.placements[t][a] = cal.values[t];
  }
  if (!ok) {
    std::ostringstream ctx;
    ctx << "achieved=[";
    for (std::size_t a = 0; a < kDof; ++a) ctx << (a ? "," : "") << achieved[a];
    ctx << "] target=[";
    for (std::size_t a = 0; a < kDof; ++a) ctx << (a ? "," : "") << profile.target[a];
    ctx << "]";
    throw Error(ErrorCode::Calibration, "shake calibration did not converge", ctx.str());
  }
  return out;
}

ShakinessVector base_shake_vector(const SynthesisConfig& config, std::size_t frames, double fps) {
  if (!(config.base_shake >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "base shake must be nonnegative", "base_shake");
  const double seconds = frames > 1 ? static_cast<double>(frames - 1) / fps : 0.0;
  ShakinessVector base;
  for (std::size_t a = 0; a < kDof; ++a) base[a] = config.base_shake * config.shake_shares[a] * seconds;
  return base;
}

SynthesisResult synthesize_detailed(const ActorPoseSequence& seq, const SkeletonLayout& layout,
                                    const EmotionFactor& e, const CameraPlacement& c0,
                                    const SynthesisConfig& config) {
  if (seq.joint_count() != layout.size())
    throw Error(ErrorCode::InvalidArgument, "pose joint count does not match skeleton", "frames");
  SynthesisResult result;
  result.saliency = region_saliency(compute_delta(seq), layout, config.saliency_temperature);
  result.tracking = tracking_trajectory(seq, layout, c0, result.saliency, config.smooth_window);

  result.profile.frequency_hz = config.shake_frequency_hz;
  result.profile.seed = config.seed;
  result.profile.target =
      target_shakiness(e, base_shake_vector(config, seq.size(), seq.fps()), config.kappa);
  const ShakinessVector existing = shakiness_vector(result.tracking);
  for (std::size_t a = 0; a < kDof; ++a)
    if (existing[a] >= result.profile.target[a]) result.profile.target[a] = 0.0;

  result.trajectory = inject_shake(result.tracking, result.profile, config.shake);
  return result;
}

CameraTrajectory synthesize(const ActorPoseSequence& seq, const SkeletonLayout& layout,
                            const EmotionFactor& e, const CameraPlacement& c0,
                            const SynthesisConfig& config) {
  return synthesize_detailed(seq, layout, e, c0, config).trajectory;
}

}  // namespace immcam
