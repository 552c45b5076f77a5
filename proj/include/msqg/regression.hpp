#pragma once

#include <span>

namespace msqg {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;  // 1 when y is exactly linear, including constant y
  int samples = 0;
};

/// Ordinary least squares y = intercept + slope * x. Needs at least two
/// distinct x values.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Least squares in log-log coordinates; all values must be positive.
LinearFit fit_power_law(std::span<const double> x, std::span<const double> y);

}  // namespace msqg
