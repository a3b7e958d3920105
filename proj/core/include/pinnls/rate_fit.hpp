#pragma once

#include <span>
#include <vector>

namespace pinnls {

/// Ordinary least-squares line through (log x, log y).
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<double> residuals;  // log y - (intercept + slope log x)
};

/// Requires >= 2 points with distinct x > 0 and y > 0; throws
/// std::invalid_argument otherwise.
RateFit fit_rate(std::span<const double> xs, std::span<const double> ys);

}  // namespace pinnls
