#include <algorithm>
#include <cmath>
#include <vector>

#include "msqg/simd.hpp"
#include "msqg/spectral.hpp"
#include "msqg/transforms.hpp"

namespace msqg {
namespace {

void check_grid(int order, int intervals) {
  require(intervals >= 2 * order, "grid of " + std::to_string(intervals) +
                                      " intervals cannot resolve order " + std::to_string(order) +
                                      " (need N_g >= 2N)");
}

// b(m x) for m = 1..order.
std::vector<double> basis_values(Basis b, int order, double x) {
  std::vector<double> v(static_cast<std::size_t>(order));
  for (int m = 1; m <= order; ++m) v[m - 1] = b == Basis::sine ? std::sin(m * x) : std::cos(m * x);
  return v;
}

double evaluate_mixed(std::span<const double> coeffs, int order, Basis b1, Basis b2, Point x) {
  const auto s1 = basis_values(b1, order, x.x1);
  const auto s2 = basis_values(b2, order, x.x2);
  double total = 0.0;
  for (int m = 0; m < order; ++m) {
    const double* row = coeffs.data() + static_cast<std::size_t>(m) * order;
    double acc = 0.0;
    for (int n = 0; n < order; ++n) acc += row[n] * s2[n];
    total += s1[m] * acc;
  }
  return total;
}

}  // namespace

SineField forward_transform(const GridField& g, int order) {
  check_grid(order, g.intervals());
  const auto v = g.values();
  require(std::all_of(v.begin(), v.end(), [](double a) { return std::isfinite(a); }),
          "forward_transform: grid contains non-finite values");
  auto& tr = SineTransforms::for_grid(g.intervals());
  const int n = tr.interior();
  std::vector<double> interior(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) interior[static_cast<std::size_t>(i) * n + j] = g.at(i + 1, j + 1);
  }
  SineField f(order);
  tr.analyze_interior(interior, order, f.coeffs());
  return f;
}

GridField inverse_transform(const SineField& f, int intervals) {
  return evaluate_on_grid(MixedField::from(f), intervals);
}

GridField evaluate_on_grid(const MixedField& f, int intervals) {
  check_grid(f.order, intervals);
  GridField out(intervals);
  SineTransforms::for_grid(intervals).synthesize_full(f.coeffs, f.order, f.basis1, f.basis2, out);
  return out;
}

SineField fractional_inverse_laplacian(const SineField& f, double alpha) {
  require_alpha_half_open(alpha);
  SineField out(f.order());
  const double p = -(1.0 - alpha);
  for (int m = 1; m <= f.order(); ++m) {
    for (int n = 1; n <= f.order(); ++n) out.at(m, n) = f.at(m, n) * std::pow(double(m * m + n * n), p);
  }
  return out;
}

MixedField spectral_derivative(const MixedField& f, int axis, int order) {
  require(axis == 1 || axis == 2, "derivative axis must be 1 or 2");
  require(order == 1 || order == 2, "derivative order must be 1 or 2");
  MixedField out = f;
  Basis& b = axis == 1 ? out.basis1 : out.basis2;
  // d/dx sin(kx) = k cos(kx), d/dx cos(kx) = -k sin(kx)
  const double sign1 = b == Basis::sine ? 1.0 : -1.0;
  for (int m = 1; m <= f.order; ++m) {
    for (int n = 1; n <= f.order; ++n) {
      const double k = axis == 1 ? m : n;
      double& c = out.coeffs[static_cast<std::size_t>(m - 1) * f.order + (n - 1)];
      c *= order == 1 ? sign1 * k : -k * k;
    }
  }
  if (order == 1) b = b == Basis::sine ? Basis::cosine : Basis::sine;
  return out;
}

VelocityCoefficients velocity_coefficients(const SineField& omega, double alpha) {
  const MixedField psi = MixedField::from(fractional_inverse_laplacian(omega, alpha));
  VelocityCoefficients v{spectral_derivative(psi, 2, 1), spectral_derivative(psi, 1, 1)};
  for (double& c : v.u1.coeffs) c = -c;
  return v;
}

VelocityField velocity_from_vorticity(const SineField& omega, double alpha, int intervals) {
  const auto c = velocity_coefficients(omega, alpha);
  return {evaluate_on_grid(c.u1, intervals), evaluate_on_grid(c.u2, intervals), alpha};
}

double evaluate_offgrid(const SineField& f, Point x) {
  return evaluate_mixed(f.coeffs(), f.order(), Basis::sine, Basis::sine, x);
}

double evaluate_offgrid(const MixedField& f, Point x) {
  return evaluate_mixed(f.coeffs, f.order, f.basis1, f.basis2, x);
}

double hessian_sup_norm(const SineField& omega, int intervals) {
  const MixedField w = MixedField::from(omega);
  double sup = 0.0;
  for (const auto& d : {spectral_derivative(w, 1, 2), spectral_derivative(w, 2, 2),
                        spectral_derivative(spectral_derivative(w, 1, 1), 2, 1)}) {
    sup = std::max(sup, evaluate_on_grid(d, intervals).max_abs());
  }
  return sup;
}

double gradient_sup_norm(const SineField& omega, int intervals) {
  const MixedField w = MixedField::from(omega);
  return std::max(evaluate_on_grid(spectral_derivative(w, 1, 1), intervals).max_abs(),
                  evaluate_on_grid(spectral_derivative(w, 2, 1), intervals).max_abs());
}

double spectral_l2_squared(const SineField& f) {
  return 0.25 * kPi * kPi * simd::active().sum_squares(f.coeffs());
}

}  // namespace msqg
