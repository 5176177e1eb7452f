#pragma once

// Procedural trajectory synthesis: a tracking camera that follows a
// saliency-weighted body target, plus seeded shake whose measured shakiness
// is calibrated to an emotion-dependent target.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "immcam/scene.hpp"
#include "immcam/shakiness.hpp"

namespace immcam {

struct RegionSaliency {
  std::array<double, kRegionCount> weights{0.25, 0.25, 0.25, 0.25};

  double operator[](Region r) const { return weights[static_cast<std::size_t>(r)]; }
};

/// Softmax over per-region energies; regions listed in `present` as false get
/// weight zero and do not take part.
RegionSaliency softmax_saliency(const std::array<double, kRegionCount>& energies, double temperature,
                                const std::array<bool, kRegionCount>& present = {true, true, true,
                                                                                 true});

/// Mean absolute positional delta (metres per frame) of each region.
std::array<double, kRegionCount> region_energies(const PoseRows& deltas, const SkeletonLayout& layout);

RegionSaliency region_saliency(const PoseRows& deltas, const SkeletonLayout& layout,
                               double temperature = 1.0);

/// Saliency-weighted mean of the region centroids of one frame.
Eigen::Vector3d saliency_target(const ActorPoseFrame& frame, const SkeletonLayout& layout,
                                const RegionSaliency& sal);

/// Centred moving average; near the ends the window shrinks symmetrically so
/// that linear motion passes through unchanged.
std::vector<Eigen::Vector3d> centered_moving_average(std::span<const Eigen::Vector3d> xs, int window);

/// Adds multiples of 2*pi so consecutive angles differ by at most pi.
void unwrap_angles(std::vector<double>& angles);

/// Tracking camera. The camera keeps its frame-0 offset from the (smoothed)
/// saliency target and keeps its frame-0 aim relative to the look-at
/// direction; roll is carried from C0. Output is in the actor-centred frame.
CameraTrajectory tracking_trajectory(const ActorPoseSequence& seq, const SkeletonLayout& layout,
                                     const CameraPlacement& c0, const RegionSaliency& sal,
                                     int smooth_window);

inline constexpr double kDefaultKappa = 1.5;

/// base * E^kappa.
ShakinessVector target_shakiness(const EmotionFactor& e, const ShakinessVector& base,
                                 double kappa = kDefaultKappa);

struct ShakeProfile {
  ShakinessVector target;
  double frequency_hz = 3.0;
  std::uint64_t seed = 0;
};

struct ShakeOptions {
  double tolerance = 0.05;
  int max_iterations = 50;  // bisection steps per bracket
  int max_draws = 256;
};

/// Relative frequencies and weights of the three sinusoids in each axis's
/// perturbation.
inline constexpr std::array<double, 3> kShakeFrequencyRatios{1.0, 0.7416407865, 1.4142135624};
inline constexpr std::array<double, 3> kShakeWeights{1.0, 0.6, 0.4};
/// Dominant-frequency multipliers cycled through by successive phase draws.
inline constexpr std::array<double, 12> kDrawFrequencyScale{1.0, 0.8, 1.25, 0.65, 1.5, 0.5,
                                                            0.4, 2.0, 0.3, 0.9, 0.25, 0.2};
/// Amplitude scan around the linear guess: [guess / span, guess * span].
inline constexpr double kScanSpan = 30.0;
inline constexpr double kScanRatio = 1.01;

/// Zero-mean, unit-peak perturbation for one axis; `draw` selects the phase
/// realisation.
std::vector<double> unit_perturbation(std::size_t frames, double fps, double frequency_hz,
                                      std::uint64_t seed, std::size_t axis, int draw);

/// Adds per-axis perturbations whose amplitudes are calibrated so the
/// shakiness of the result is within `tolerance` of the target on every axis
/// with a nonzero target. Axes with zero target are left untouched. Throws
/// `Error{Calibration}` with the achieved vector if an axis does not converge.
CameraTrajectory inject_shake(const CameraTrajectory& traj, const ShakeProfile& profile,
                              const ShakeOptions& options = {});

/// Share of the base shake assigned to each axis (x, y, z, yaw, pitch, roll).
inline constexpr std::array<double, kDof> kDefaultShakeShares{0.1 / 3, 0.1 / 3, 0.1 / 3,
                                                              0.35,    0.35,    0.2};

struct SynthesisConfig {
  double kappa = kDefaultKappa;
  /// Total shakiness per second of footage at E = 1.
  double base_shake = 0.25;
  std::array<double, kDof> shake_shares = kDefaultShakeShares;
  double shake_frequency_hz = 3.0;
  int smooth_window = 9;
  double saliency_temperature = 1.0;
  std::uint64_t seed = 0;
  ShakeOptions shake;
};

ShakinessVector base_shake_vector(const SynthesisConfig& config, std::size_t frames, double fps);

struct SynthesisResult {
  CameraTrajectory trajectory;
  CameraTrajectory tracking;
  RegionSaliency saliency;
  ShakeProfile profile;
};

/// tracking_trajectory followed by inject_shake. Axes whose tracking shake
/// already reaches the emotion target are left untouched.
SynthesisResult synthesize_detailed(const ActorPoseSequence& seq, const SkeletonLayout& layout,
                                    const EmotionFactor& e, const CameraPlacement& c0,
                                    const SynthesisConfig& config);

CameraTrajectory synthesize(const ActorPoseSequence& seq, const SkeletonLayout& layout,
                            const EmotionFactor& e, const CameraPlacement& c0,
                            const SynthesisConfig& config);

}  // namespace immcam
