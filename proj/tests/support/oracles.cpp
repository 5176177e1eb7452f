#include "oracles.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Geometry>

namespace immcam::oracle {

std::vector<std::size_t> stationary(const std::vector<double>& c, double eps) {
  std::vector<std::size_t> out;
  if (c.size() < 3) return out;
  std::vector<int> sign(c.size() - 1);
  for (std::size_t t = 0; t + 1 < c.size(); ++t) {
    const double d = c[t + 1] - c[t];
    sign[t] = std::fabs(d) < eps ? 0 : (d > 0 ? 1 : -1);
  }
  for (std::size_t t = 0; t + 1 < sign.size(); ++t) {
    const bool reversal = sign[t] * sign[t + 1] == -1;
    const bool plateau = sign[t] != 0 && sign[t + 1] == 0;
    if (reversal || plateau) out.push_back(t + 1);
  }
  return out;
}

double shakiness(const std::vector<double>& c, double eps) {
  const std::vector<std::size_t> pv = stationary(c, eps);
  double sum = 0.0;
  for (std::size_t i = 1; i < pv.size(); ++i)
    sum += std::fabs(c[pv[i]] - c[pv[i - 1]]) / static_cast<double>(pv[i] - pv[i - 1]);
  return sum;
}

Eigen::Matrix<double, 3, 4> projection_matrix(const DofVector& cam, const CameraIntrinsics& intr) {
  const double cy = std::cos(cam.yaw()), sy = std::sin(cam.yaw());
  const double cp = std::cos(-cam.pitch()), sp = std::sin(-cam.pitch());
  const double cr = std::cos(cam.roll()), sr = std::sin(cam.roll());
  Eigen::Matrix3d ry, rx, rz, flip;
  ry << cy, 0, sy, 0, 1, 0, -sy, 0, cy;
  rx << 1, 0, 0, 0, cp, -sp, 0, sp, cp;
  rz << cr, -sr, 0, sr, cr, 0, 0, 0, 1;
  flip << -1, 0, 0, 0, -1, 0, 0, 0, 1;
  const Eigen::Matrix3d r = ry * rx * rz * flip;

  Eigen::Matrix3d k;
  k << intr.focal_length() * intr.frame_width() / intr.sensor_width(), 0, intr.frame_width() / 2.0, 0,
      intr.focal_length() * intr.frame_height() / intr.sensor_height(), intr.frame_height() / 2.0, 0, 0, 1;
  Eigen::Matrix<double, 3, 4> ext;
  ext.leftCols<3>() = r.transpose();
  ext.col(3) = -r.transpose() * cam.position();
  return k * ext;
}

bool in_frustum(const Eigen::Vector3d& p, const DofVector& cam, const CameraIntrinsics& intr) {
  const Eigen::Vector3d h = projection_matrix(cam, intr) * p.homogeneous();
  if (!(h.z() > 0.0)) return false;
  const double u = h.x() / h.z();
  const double v = h.y() / h.z();
  return u >= 0.0 && u < intr.frame_width() && v >= 0.0 && v < intr.frame_height();
}

double hausdorff(const std::vector<std::array<double, 6>>& a, const std::vector<std::array<double, 6>>& b) {
  auto dist = [](const std::array<double, 6>& p, const std::array<double, 6>& q) {
    double s = 0.0;
    for (std::size_t i = 0; i < 6; ++i) s += (p[i] - q[i]) * (p[i] - q[i]);
    return std::sqrt(s);
  };
  auto directed = [&](const auto& x, const auto& y) {
    double worst = 0.0;
    for (const auto& p : x) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : y) best = std::min(best, dist(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

double point_loss(const CameraTrajectory& ref, const CameraTrajectory& gen) {
  double total = 0.0;
  for (std::size_t t = 0; t < ref.size(); ++t)
    for (std::size_t q = 0; q < 6; ++q) total += std::pow(ref.placements[t][q] - gen.placements[t][q], 2);
  for (std::size_t t = 1; t <= gen.size() - 2; ++t)
    for (std::size_t q = 0; q < 6; ++q) {
      total += std::fabs(gen.placements[t + 1][q] - gen.placements[t][q]);
      total += std::fabs(gen.placements[t][q] - gen.placements[t - 1][q]);
    }
  return total;
}

double softmax_weight(const std::array<double, 4>& energies, std::size_t k, double temperature) {
  double z = 0.0;
  for (double e : energies) z += std::exp(e / temperature);
  return std::exp(energies[k] / temperature) / z;
}

}  // namespace immcam::oracle
