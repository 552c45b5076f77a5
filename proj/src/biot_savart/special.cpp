#include <cmath>

#include "msqg/biot_savart.hpp"

namespace msqg {

// Alternating series sum_k (-1)^k (2k+1)^{-s}, accelerated with the
// Cohen-Rodriguez Villegas-Zagier weights (error ~ 5.8^{-n}).
double dirichlet_beta(double s) {
  require(s > 0.0, "dirichlet_beta needs s > 0");
  constexpr int n = 40;
  double d = std::pow(3.0 + std::sqrt(8.0), n);
  d = 0.5 * (d + 1.0 / d);
  double b = -1.0;
  double c = -d;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    c = b - c;
    sum += c * std::pow(2.0 * k + 1.0, -s);
    b *= (k + n) * (k - n) / ((k + 0.5) * (k + 1.0));
  }
  return sum / d;
}

double epstein_zeta_square(double s) {
  require(s > 0.0 && s != 1.0, "epstein_zeta_square needs s > 0, s != 1");
  return 4.0 * std::riemann_zeta(s) * dirichlet_beta(s);
}

double analytic_calibration(double alpha) {
  require_alpha_half_open(alpha);
  return std::pow(4.0, 1.0 - alpha) * kPi * std::tgamma(1.0 - alpha) / (2.0 * std::tgamma(1.0 + alpha));
}

}  // namespace msqg
