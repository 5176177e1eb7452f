#include "immcam/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "immcam/error.hpp"

namespace immcam {

double point_loss(const CameraTrajectory& ref, const CameraTrajectory& gen) {
  if (ref.size() != gen.size())
    throw Error(ErrorCode::InvalidArgument, "trajectory lengths differ",
                std::to_string(ref.size()) + " vs " + std::to_string(gen.size()));
  double l2 = 0.0;
  for (std::size_t t = 0; t < ref.size(); ++t)
    for (std::size_t a = 0; a < kDof; ++a) {
      const double d = ref.pose(t)[a] - gen.pose(t)[a];
      l2 += d * d;
    }
  double tv = 0.0;
  const auto& g = gen.placements;
  for (std::size_t t = 1; t + 1 < g.size(); ++t)
    for (std::size_t a = 0; a < kDof; ++a) tv += std::abs(g[t + 1][a] - g[t][a]) + std::abs(g[t][a] - g[t - 1][a]);
  return l2 + tv;
}

double combined_trajectory_objective(const CameraTrajectory& ref, const CameraTrajectory& gen,
                                     const TrajectoryWeights& weights) {
  return weights.lambda_mse * point_loss(ref, gen) +
         weights.lambda_sk * shakiness_distance(shakiness_vector(ref), shakiness_vector(gen));
}

FeatureSet actor_velocity_features(const ActorPoseSequence& seq) {
  const PoseRows vel = compute_velocity(seq);
  FeatureSet out;
  out.reserve(seq.size() - 1);
  const double joints = static_cast<double>(seq.joint_count());
  for (std::size_t t = 1; t < vel.size(); ++t) {
    std::array<double, kDof> row{};
    for (const auto& j : vel[t].joints)
      for (std::size_t a = 0; a < kDof; ++a) row[a] += j[a];
    for (auto& x : row) x /= joints;
    out.push_back(row);
  }
  return out;
}

FeatureSet camera_velocity_features(const CameraTrajectory& traj) {
  FeatureSet out;
  if (traj.size() < 2) return out;
  out.reserve(traj.size() - 1);
  for (std::size_t t = 1; t < traj.size(); ++t) {
    std::array<double, kDof> row{};
    for (std::size_t a = 0; a < kDof; ++a)
      row[a] = (traj.placements[t][a] - traj.placements[t - 1][a]) * traj.fps;
    out.push_back(row);
  }
  return out;
}

std::array<bool, kDof> normalize_features(FeatureSet& features) {
  std::array<bool, kDof> degenerate{};
  for (std::size_t a = 0; a < kDof; ++a) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& row : features) {
      lo = std::min(lo, row[a]);
      hi = std::max(hi, row[a]);
    }
    const double range = hi - lo;
    degenerate[a] = !(range > 0.0);
    for (auto& row : features) row[a] = degenerate[a] ? 0.0 : (row[a] - lo) / range;
  }
  return degenerate;
}

namespace {

double directed_hausdorff(const FeatureSet& from, const FeatureSet& to, const std::array<bool, kDof>& use) {
  double worst = 0.0;
  for (const auto& p : from) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& q : to) {
      double d2 = 0.0;
      for (std::size_t a = 0; a < kDof; ++a)
        if (use[a]) d2 += (p[a] - q[a]) * (p[a] - q[a]);
      nearest = std::min(nearest, d2);
      if (nearest <= worst) break;  // cannot raise the running maximum
    }
    worst = std::max(worst, nearest);
  }
  return std::sqrt(worst);
}

}  // namespace

double hausdorff_distance(const FeatureSet& a, const FeatureSet& b, const std::array<bool, kDof>& use_axis) {
  if (a.empty() || b.empty())
    throw Error(ErrorCode::UndefinedMetric, "Hausdorff distance of an empty set", "hausdorff");
  return std::max(directed_hausdorff(a, b, use_axis), directed_hausdorff(b, a, use_axis));
}

SpatialSync spatial_sync(const ActorPoseSequence& seq, const CameraTrajectory& traj,
                         const SpatialSyncOptions& options) {
  if (seq.size() != traj.size())
    throw Error(ErrorCode::InvalidArgument, "actor and camera lengths differ",
                std::to_string(seq.size()) + " vs " + std::to_string(traj.size()));
  FeatureSet actor = actor_velocity_features(seq);
  FeatureSet camera = camera_velocity_features(traj);
  SpatialSync out;
  out.degenerate_actor = normalize_features(actor);
  out.degenerate_camera = normalize_features(camera);
  std::array<bool, kDof> use{true, true, true, true, true, true};
  if (options.position_only) use = {true, true, true, false, false, false};
  out.distance = hausdorff_distance(actor, camera, use);
  return out;
}

double spatial_sync_distance(const ActorPoseSequence& seq, const CameraTrajectory& traj,
                             const SpatialSyncOptions& options) {
  return spatial_sync(seq, traj, options).distance;
}

// ---------------------------------------------------------------------------
// Correlations

namespace {

void check_pair(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::InvalidArgument, "correlation inputs differ in length", "correlation");
  if (a.size() < 3)
    throw Error(ErrorCode::InvalidArgument, "correlation needs at least 3 samples", "correlation");
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  if (constant(a) || constant(b))
    throw Error(ErrorCode::UndefinedMetric, "correlation of a constant vector", "correlation");
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t k) { return v[i] < v[k]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t k = i;
    while (k + 1 < order.size() && v[order[k + 1]] == v[order[i]]) ++k;
    const double r = 0.5 * static_cast<double>(i + k) + 1.0;
    for (std::size_t m = i; m <= k; ++m) ranks[order[m]] = r;
    i = k + 1;
  }
  return ranks;
}

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

double pearson(std::span<const double> a, std::span<const double> b) {
  check_pair(a, b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

double spearman(std::span<const double> a, std::span<const double> b) {
  check_pair(a, b);
  const std::vector<double> ra = average_ranks(a);
  const std::vector<double> rb = average_ranks(b);
  return pearson(ra, rb);
}

double kendall(std::span<const double> a, std::span<const double> b) {
  check_pair(a, b);
  double concordant = 0.0, discordant = 0.0, ties_a = 0.0, ties_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = i + 1; k < a.size(); ++k) {
      const int sa = sgn(a[i] - a[k]);
      const int sb = sgn(b[i] - b[k]);
      if (sa == 0 && sb == 0) continue;
      if (sa == 0) {
        ties_a += 1.0;
      } else if (sb == 0) {
        ties_b += 1.0;
      } else if (sa == sb) {
        concordant += 1.0;
      } else {
        discordant += 1.0;
      }
    }
  const double denom = std::sqrt((concordant + discordant + ties_a) * (concordant + discordant + ties_b));
  return (concordant - discordant) / denom;
}

Correlations emotion_correlation(std::span<const double> emotions, std::span<const double> shakiness) {
  return {pearson(emotions, shakiness), spearman(emotions, shakiness), kendall(emotions, shakiness)};
}

// ---------------------------------------------------------------------------
// Framing metrics

double rot_shift(const ActorPoseFrame& pose, const CameraPlacement& cam, const CameraIntrinsics& intr,
                 const SkeletonLayout& layout, const AestheticsConfig& config) {
  return composition_loss(pose, cam, intr, layout, config);
}

double adj_dis(const CameraPlacement& before, const CameraPlacement& after) {
  double s = 0.0;
  for (std::size_t a = kX; a <= kZ; ++a) s += std::abs(after.pose[a] - before.pose[a]);
  return s / 3.0;
}

double vis_acc(const ActorPoseFrame& pose, const CameraPlacement& before, const CameraPlacement& after,
               const CameraIntrinsics& intr) {
  const double joints = static_cast<double>(pose.joints.size());
  return 100.0 * (joints - visualization_loss(pose, before, after, intr)) / joints;
}

// ---------------------------------------------------------------------------
// Immersion score

double combine_immersion(double spatial, double emotional, double aesthetic, double alpha, double beta) {
  if (!(alpha >= 0.0 && beta >= 0.0 && alpha + beta <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "immersion weights must satisfy alpha, beta >= 0, alpha + beta <= 1",
                "alpha=" + std::to_string(alpha) + " beta=" + std::to_string(beta));
  return alpha * spatial + beta * emotional + (1.0 - alpha - beta) * aesthetic;
}

ImmersionReport immersion_score(double hausdorff, const Correlations& corr, double rot_shift_px,
                                double vis_acc_pct, double alpha, double beta, double frame_diagonal) {
  if (!(frame_diagonal > 0.0))
    throw Error(ErrorCode::InvalidArgument, "frame diagonal must be positive", "frame_diagonal");
  ImmersionReport r;
  r.alpha = alpha;
  r.beta = beta;
  r.spatial = 1.0 / (1.0 + std::max(0.0, hausdorff));
  r.emotional = std::max(0.0, corr.pcc);
  r.aesthetic = 0.5 * (1.0 - std::min(std::max(0.0, rot_shift_px), frame_diagonal) / frame_diagonal) +
                0.5 * std::clamp(vis_acc_pct, 0.0, 100.0) / 100.0;
  r.combined = combine_immersion(r.spatial, r.emotional, r.aesthetic, alpha, beta);
  r.raw = {{"hausdorff", hausdorff},       {"pcc", corr.pcc},
           {"srcc", corr.srcc},            {"krcc", corr.krcc},
           {"rot_shift_px", rot_shift_px}, {"vis_acc_pct", vis_acc_pct}};
  return r;
}

}  // namespace immcam
