#pragma once

// Immersion metrics: trajectory point loss, spatial synchronisation via the
// Hausdorff distance between velocity features, emotion/shakiness
// correlation, framing metrics and the convex immersion score.

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "immcam/aesthetics.hpp"
#include "immcam/scene.hpp"
#include "immcam/shakiness.hpp"

namespace immcam {

/// Squared L2 distance plus the absolute total variation of `gen`:
/// sum_t sum_q |g[t+1]-g[t]| + |g[t]-g[t-1]| for t = 1 .. T-2.
double point_loss(const CameraTrajectory& ref, const CameraTrajectory& gen);

struct TrajectoryWeights {
  double lambda_mse = 10.0;
  double lambda_sk = 1.0;
};

/// lambda_mse * point_loss + lambda_sk * shakiness_distance.
double combined_trajectory_objective(const CameraTrajectory& ref, const CameraTrajectory& gen,
                                     const TrajectoryWeights& weights = {});

using FeatureSet = std::vector<std::array<double, kDof>>;

/// Rows t = 1 .. T-1 of the joint-averaged actor velocity.
FeatureSet actor_velocity_features(const ActorPoseSequence& seq);

/// Rows t = 1 .. T-1 of (C_t - C_{t-1}) * fps.
FeatureSet camera_velocity_features(const CameraTrajectory& traj);

/// Min-max normalises each axis to [0, 1] in place. Zero-range axes are set to
/// 0 and reported as true.
std::array<bool, kDof> normalize_features(FeatureSet& features);

/// Symmetric Hausdorff distance using the axes flagged in `use_axis`.
double hausdorff_distance(const FeatureSet& a, const FeatureSet& b,
                          const std::array<bool, kDof>& use_axis = {true, true, true, true, true, true});

struct SpatialSyncOptions {
  bool position_only = false;
};

struct SpatialSync {
  double distance = 0.0;
  std::array<bool, kDof> degenerate_actor{};
  std::array<bool, kDof> degenerate_camera{};
};

SpatialSync spatial_sync(const ActorPoseSequence& seq, const CameraTrajectory& traj,
                         const SpatialSyncOptions& options = {});

double spatial_sync_distance(const ActorPoseSequence& seq, const CameraTrajectory& traj,
                             const SpatialSyncOptions& options = {});

struct Correlations {
  double pcc = 0.0;
  double srcc = 0.0;
  double krcc = 0.0;
};

double pearson(std::span<const double> a, std::span<const double> b);
/// Pearson correlation of average ranks.
double spearman(std::span<const double> a, std::span<const double> b);
/// Kendall tau-b.
double kendall(std::span<const double> a, std::span<const double> b);

/// Requires K >= 3 and nonconstant inputs; throws `Error{UndefinedMetric}`
/// otherwise.
Correlations emotion_correlation(std::span<const double> emotions, std::span<const double> shakiness);

/// Hard composition loss (rule-of-thirds shift), pixels.
double rot_shift(const ActorPoseFrame& pose, const CameraPlacement& cam, const CameraIntrinsics& intr,
                 const SkeletonLayout& layout, const AestheticsConfig& config = {});

/// Mean absolute position change, metres.
double adj_dis(const CameraPlacement& before, const CameraPlacement& after);

/// Percentage of joints whose visibility is unchanged.
double vis_acc(const ActorPoseFrame& pose, const CameraPlacement& before, const CameraPlacement& after,
               const CameraIntrinsics& intr);

struct ImmersionReport {
  double spatial = 0.0;    // I_s
  double emotional = 0.0;  // I_e
  double aesthetic = 0.0;  // I_a
  double alpha = 0.0;
  double beta = 0.0;
  double combined = 0.0;   // I
  std::map<std::string, double> raw;
};

/// Combines the sub-scores: I = alpha I_s + beta I_e + (1 - alpha - beta) I_a.
double combine_immersion(double spatial, double emotional, double aesthetic, double alpha, double beta);

/// I_s = 1 / (1 + HD), I_e = max(0, PCC),
/// I_a = 0.5 (1 - min(RoTSft, diag) / diag) + 0.5 VisAcc / 100.
ImmersionReport immersion_score(double hausdorff, const Correlations& corr, double rot_shift_px,
                                double vis_acc_pct, double alpha, double beta, double frame_diagonal);

}  // namespace immcam
