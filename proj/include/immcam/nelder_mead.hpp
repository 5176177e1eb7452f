#pragma once

#include <functional>
#include <span>
#include <vector>

namespace immcam {

struct NelderMeadOptions {
  int max_evaluations = 500;
  /// Stop once every vertex lies within this distance of the best vertex.
  double diameter_tolerance = 1e-4;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Downhill simplex minimisation with dimension-adaptive coefficients
/// (reflection 1, expansion 1 + 2/n, contraction 3/4 - 1/(2n), shrink 1 - 1/n).
/// The initial simplex is x0 plus one vertex per coordinate offset by
/// `steps[i]`.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, std::span<const double> steps,
                             const NelderMeadOptions& options = {});

}  // namespace immcam
