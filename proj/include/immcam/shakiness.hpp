#pragma once

// Time-domain camera-shake statistic. Direction changes along one axis are
// detected as sign changes of the discrete first difference; the statistic
// sums |c(pv_i) - c(pv_{i-1})| / (pv_i - pv_{i-1}) over consecutive direction
// changes. Durations are counted in frames.

#include <array>
#include <span>
#include <vector>

#include "immcam/scene.hpp"

namespace immcam {

inline constexpr double kStationaryEpsilon = 1e-9;

struct StationaryPoints {
  std::vector<std::size_t> indices;

  bool operator==(const StationaryPoints&) const = default;
};

/// Frame t+1 is stationary when d_t = c[t+1]-c[t] and d_{t+1} have strictly
/// opposite signs, or when d_t != 0 and d_{t+1} == 0 (first frame of a
/// plateau). |d| < epsilon counts as zero. Endpoints are never stationary.
StationaryPoints stationary_points(std::span<const double> axis, double epsilon = kStationaryEpsilon);

double axis_shakiness(std::span<const double> axis, double epsilon = kStationaryEpsilon);

struct ShakinessVector {
  std::array<double, kDof> values{};

  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  double sum() const;
  bool is_zero() const;

  bool operator==(const ShakinessVector&) const = default;
};

/// Extracts one axis of a trajectory's samples as a contiguous series. The
/// uniform offset is left out; no statistic here depends on it.
std::vector<double> axis_series(const CameraTrajectory& traj, std::size_t axis);

ShakinessVector shakiness_vector(const CameraTrajectory& traj, double epsilon = kStationaryEpsilon);

/// Euclidean distance between two shakiness vectors (the shakiness loss).
double shakiness_distance(const ShakinessVector& a, const ShakinessVector& b);

/// 1 - cos(a, b). Throws `Error{UndefinedMetric}` if either vector is zero.
double cosine_shakiness_distance(const ShakinessVector& a, const ShakinessVector& b);

/// The statistic divides by frame counts; converting a vector measured at
/// `from_fps` to per-frame units at `to_fps` multiplies by from_fps / to_fps.
ShakinessVector rescale_shakiness(const ShakinessVector& s, double from_fps, double to_fps);

}  // namespace immcam
