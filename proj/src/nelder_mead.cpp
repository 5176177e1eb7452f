#include "immcam/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "immcam/error.hpp"

namespace immcam {

namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, std::span<const double> steps,
                             const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  if (n == 0 || steps.size() != n)
    throw Error(ErrorCode::InvalidArgument, "simplex steps must match the dimension", "nelder_mead");

  const double dn = static_cast<double>(n);
  const double alpha = 1.0;
  const double beta = 1.0 + 2.0 / dn;
  const double gamma = 0.75 - 0.5 / dn;
  const double delta = n > 1 ? 1.0 - 1.0 / dn : 0.5;

  NelderMeadResult result;
  auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::vector<Vertex> simplex;
  simplex.reserve(n + 1);
  simplex.push_back({x0, eval(x0)});
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x = x0;
    x[i] += steps[i];
    simplex.push_back({x, eval(x)});
  }

  auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  std::vector<double> centroid(n), trial(n);
  auto along = [&](double t, const std::vector<double>& toward) {
    for (std::size_t i = 0; i < n; ++i) trial[i] = centroid[i] + t * (toward[i] - centroid[i]);
    return trial;
  };

  while (true) {
    std::stable_sort(simplex.begin(), simplex.end(), by_value);
    double diameter = 0.0;
    for (std::size_t k = 1; k <= n; ++k) diameter = std::max(diameter, distance(simplex[k].x, simplex[0].x));
    if (diameter < options.diameter_tolerance) {
      result.converged = true;
      break;
    }
    if (result.evaluations >= options.max_evaluations) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[k].x[i] / dn;

    Vertex& worst = simplex[n];
    const Vertex reflected{along(-alpha, worst.x), 0.0};
    const double fr = eval(reflected.x);

    if (fr < simplex[0].f) {
      std::vector<double> expanded = along(-alpha * beta, worst.x);
      const double fe = eval(expanded);
      if (fe < fr)
        worst = {std::move(expanded), fe};
      else
        worst = {reflected.x, fr};
    } else if (fr < simplex[n - 1].f) {
      worst = {reflected.x, fr};
    } else {
      // Outside contraction if the reflection beat the worst vertex, inside otherwise.
      const bool outside = fr < worst.f;
      std::vector<double> contracted = outside ? along(-alpha * gamma, worst.x) : along(gamma, worst.x);
      const double fc = eval(contracted);
      if (fc < (outside ? fr : worst.f)) {
        worst = {std::move(contracted), fc};
      } else {
        for (std::size_t k = 1; k <= n; ++k) {
          for (std::size_t i = 0; i < n; ++i)
            simplex[k].x[i] = simplex[0].x[i] + delta * (simplex[k].x[i] - simplex[0].x[i]);
          simplex[k].f = eval(simplex[k].x);
        }
      }
    }
  }

  result.x = simplex[0].x;
  result.value = simplex[0].f;
  return result;
}

}  // namespace immcam
