#include "immcam/shakiness.hpp"

#include <cmath>
#include <numeric>

#include "immcam/error.hpp"

namespace immcam {

namespace {

int sign_of(double d, double epsilon) {
  if (std::abs(d) < epsilon) return 0;
  return d > 0.0 ? 1 : -1;
}

}  // namespace

StationaryPoints stationary_points(std::span<const double> axis, double epsilon) {
  StationaryPoints out;
  const std::size_t n = axis.size();
  if (n < 3) return out;
  for (std::size_t t = 0; t + 2 < n; ++t) {
    const int s0 = sign_of(axis[t + 1] - axis[t], epsilon);
    const int s1 = sign_of(axis[t + 2] - axis[t + 1], epsilon);
    if (s0 != 0 && (s1 == -s0 || s1 == 0)) out.indices.push_back(t + 1);
  }
  return out;
}

double axis_shakiness(std::span<const double> axis, double epsilon) {
  const StationaryPoints pv = stationary_points(axis, epsilon);
  double total = 0.0;
  for (std::size_t i = 1; i < pv.indices.size(); ++i) {
    const std::size_t a = pv.indices[i - 1];
    const std::size_t b = pv.indices[i];
    total += std::abs(axis[b] - axis[a]) / static_cast<double>(b - a);
  }
  return total;
}

double ShakinessVector::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

bool ShakinessVector::is_zero() const {
  for (double v : values)
    if (v != 0.0) return false;
  return true;
}

std::vector<double> axis_series(const CameraTrajectory& traj, std::size_t axis) {
  std::vector<double> out;
  out.reserve(traj.size());
  for (const auto& p : traj.placements) out.push_back(p[axis]);
  return out;
}

ShakinessVector shakiness_vector(const CameraTrajectory& traj, double epsilon) {
  ShakinessVector s;
  for (std::size_t a = 0; a < kDof; ++a) s[a] = axis_shakiness(axis_series(traj, a), epsilon);
  return s;
}

double shakiness_distance(const ShakinessVector& a, const ShakinessVector& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < kDof; ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(acc);
}

double cosine_shakiness_distance(const ShakinessVector& a, const ShakinessVector& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < kDof; ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0)
    throw Error(ErrorCode::UndefinedMetric, "cosine distance of a zero shakiness vector", "CosD_sk");
  return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

ShakinessVector rescale_shakiness(const ShakinessVector& s, double from_fps, double to_fps) {
  if (!(from_fps > 0.0 && to_fps > 0.0))
    throw Error(ErrorCode::InvalidArgument, "fps must be positive", "rescale_shakiness");
  ShakinessVector out = s;
  for (auto& v : out.values) v *= from_fps / to_fps;
  return out;
}

}  // namespace immcam
