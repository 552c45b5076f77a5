#include <cmath>

#include "msqg/biot_savart.hpp"

namespace msqg {
namespace {

double inv_pow(double dx, double dy, double alpha) { return std::pow(dx * dx + dy * dy, -(1.0 + alpha)); }

void check_pair(Point x, Point y, double alpha) {
  require_alpha_half_open(alpha);
  require(!(x == y), "kernel evaluated at y = x; the singular point must be excluded by the caller");
}

}  // namespace

double kernel_K1(Point x, Point y, double alpha) {
  check_pair(x, y, alpha);
  const auto r = ReflectedPoint::of(x);
  const double dm = x.x2 - y.x2;
  const double dp = x.x2 + y.x2;
  return dm * inv_pow(r.x.x1 - y.x1, r.x.x2 - y.x2, alpha) -
         dm * inv_pow(r.x_tilde.x1 - y.x1, r.x_tilde.x2 - y.x2, alpha) -
         dp * inv_pow(r.x_bar.x1 - y.x1, r.x_bar.x2 - y.x2, alpha) +
         dp * inv_pow(x.x1 + y.x1, x.x2 + y.x2, alpha);
}

double kernel_K2(Point x, Point y, double alpha) {
  check_pair(x, y, alpha);
  const auto r = ReflectedPoint::of(x);
  const double dm = x.x1 - y.x1;
  const double dp = x.x1 + y.x1;
  return -(dm * inv_pow(r.x.x1 - y.x1, r.x.x2 - y.x2, alpha) -
           dm * inv_pow(r.x_bar.x1 - y.x1, r.x_bar.x2 - y.x2, alpha) -
           dp * inv_pow(r.x_tilde.x1 - y.x1, r.x_tilde.x2 - y.x2, alpha) +
           dp * inv_pow(x.x1 + y.x1, x.x2 + y.x2, alpha));
}

double asymptotic_K(int j, Point x, Point y, double alpha) {
  require(j == 1 || j == 2, "kernel component must be 1 or 2");
  const double r2 = y.x1 * y.x1 + y.x2 * y.x2;
  const double sign = j == 1 ? -1.0 : 1.0;
  return sign * 8.0 * (1.0 + alpha) * x.component(j) * y.x1 * y.x2 * std::pow(r2, -(2.0 + alpha));
}

double relative_kernel_error(int j, Point x, Point y, double alpha) {
  const double a = asymptotic_K(j, x, y, alpha);
  require(a != 0.0, "asymptotic kernel vanishes at this pair; relative error undefined");
  return kernel_K(j, x, y, alpha) / a - 1.0;
}

}  // namespace msqg
