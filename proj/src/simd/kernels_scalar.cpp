#include <algorithm>
#include <cmath>

#include "kernels_internal.hpp"

namespace msqg::simd::detail {
namespace {

void lincomb(std::span<double> out, double a, std::span<const double> x, double b,
             std::span<const double> y) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x[i] + b * y[i];
}

void axpy(std::span<double> y, double a, std::span<const double> x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

void multiply(std::span<double> y, std::span<const double> m) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] *= m[i];
}

void advection(std::span<double> out, std::span<const double> u1, std::span<const double> w1,
               std::span<const double> u2, std::span<const double> w2) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = -(u1[i] * w1[i] + u2[i] * w2[i]);
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double sum_squares(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

KernelSums plane_kernel_row(const KernelRow& row) {
  KernelSums sums;
  const double d1 = row.x1 - row.y1;
  for (std::size_t j = 0; j < row.y2.size(); ++j) {
    const double w = row.weight[j];
    if (w == 0.0) continue;
    const double d2 = row.x2 - row.y2[j];
    const double inv = std::pow(d1 * d1 + d2 * d2, row.exponent) * w * row.omega[j];
    sums.s1 += d2 * inv;
    sums.s2 -= d1 * inv;
  }
  return sums;
}

KernelSums symmetric_kernel_row(const KernelRow& row) {
  KernelSums sums;
  const double dm1 = row.x1 - row.y1;
  const double dp1 = row.x1 + row.y1;
  for (std::size_t j = 0; j < row.y2.size(); ++j) {
    const double w = row.weight[j];
    if (w == 0.0) continue;
    const double dm2 = row.x2 - row.y2[j];
    const double dp2 = row.x2 + row.y2[j];
    const double e = row.exponent;
    const double direct = std::pow(dm1 * dm1 + dm2 * dm2, e);   // |x - y|
    const double tilde = std::pow(dp1 * dp1 + dm2 * dm2, e);    // |x~ - y|
    const double bar = std::pow(dm1 * dm1 + dp2 * dp2, e);      // |x^ - y|
    const double sum = std::pow(dp1 * dp1 + dp2 * dp2, e);      // |x + y|
    const double wo = w * row.omega[j];
    sums.s1 += wo * (dm2 * (direct - tilde) - dp2 * (bar - sum));
    sums.s2 -= wo * (dm1 * (direct - bar) - dp1 * (tilde - sum));
  }
  return sums;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{Isa::scalar,   lincomb,     axpy,
                             multiply,      advection,   max_abs,
                             sum_squares,   plane_kernel_row, symmetric_kernel_row};
  return t;
}

}  // namespace msqg::simd::detail
