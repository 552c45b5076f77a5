#include "msqg/initial_data.hpp"

#include <algorithm>
#include <cmath>

namespace msqg {
namespace {

// Bridges on u = 2t - 1 in [0, 1] matching the end monomial to order k at
// t = 1/2 and the constant 1 to order k at t = 1 (k = blend order).
double cubic_bridge(double u, int order) {
  const double base = 0.125 * (1.0 + u) * (1.0 + u) * (1.0 + u);
  const double u3 = u * u * u;
  if (order == 2) return base + u3 * (21.0 / 4 + u * (-9.0 + u * (15.0 / 4)));
  const double u5 = u3 * u * u;
  return base + u5 * (69.0 + u * (-1913.0 / 8 + u * (2517.0 / 8 + u * (-1491.0 / 8 + u * (335.0 / 8)))));
}

double linear_bridge(double u, int order) {
  const double base = 0.5 * (1.0 + u);
  const double u3 = u * u * u;
  if (order == 2) return base + u3 * (2.0 + u * (-3.5 + u * 1.5));
  const double u5 = u3 * u * u;
  return base + u5 * (28.0 + u * (-98.0 + u * (130.0 + u * (-77.5 + u * 17.5))));
}

double fold(double s) { return std::min(s, kPi - s); }

}  // namespace

void validate(const InitialDataSpec& spec) {
  require(std::isfinite(spec.delta) && spec.delta > 0.0, "delta must be positive");
  require(spec.delta_max > 0.0 && spec.delta_max < kPi / 4, "delta_max must lie in (0, pi/4)");
  require(spec.delta <= spec.delta_max,
          "delta = " + std::to_string(spec.delta) + " exceeds delta_max = " + std::to_string(spec.delta_max));
  require(spec.patch_radius() > 0.0 && spec.patch_radius() <= 0.5 * spec.delta,
          "origin_patch_radius must lie in (0, delta/2]");
  require(spec.blend_order == 2 || spec.blend_order == 4, "blend_order must be 2 or 4");
  require(spec.N >= 4, "N must be at least 4");
  require(spec.N_g >= 2 * spec.N, "N_g must be at least 2N");
}

double cubic_profile(double s, double delta, int blend_order) {
  const double t = fold(s) / delta;
  if (t <= 0.5) return t * t * t;
  if (t >= 1.0) return 1.0;
  return cubic_bridge(2.0 * t - 1.0, blend_order);
}

double linear_profile(double s, double delta, int blend_order) {
  const double t = fold(s) / delta;
  if (t <= 0.5) return t;
  if (t >= 1.0) return 1.0;
  return linear_bridge(2.0 * t - 1.0, blend_order);
}

double omega0_value(const InitialDataSpec& spec, double x1, double x2) {
  return cubic_profile(x1, spec.delta, spec.blend_order) * linear_profile(x2, spec.delta, spec.blend_order);
}

FunctionSampler omega0_sampler(const InitialDataSpec& spec) {
  const double d = spec.delta;
  return FunctionSampler([spec](double a, double b) { return omega0_value(spec, a, b); },
                         {0.5 * d, d, kPi - d, kPi - 0.5 * d}, std::min(kPi / 4, d));
}

void project_degenerate(SineField& f) {
  const int n = f.order();
  double norm = 0.0;
  for (int m = 1; m <= n; ++m) norm += double(m) * m;
  for (int k = 1; k <= n; ++k) {
    double s = 0.0;
    for (int m = 1; m <= n; ++m) s += m * f.at(m, k);
    const double lambda = s / norm;
    for (int m = 1; m <= n; ++m) f.at(m, k) -= lambda * m;
  }
}

SineField build_omega0(const InitialDataSpec& spec) {
  validate(spec);
  GridField g(spec.N_g);
  for (int i = 0; i <= spec.N_g; ++i) {
    const double p = cubic_profile(g.coordinate(i), spec.delta, spec.blend_order);
    for (int j = 0; j <= spec.N_g; ++j) {
      g.at(i, j) = p * linear_profile(g.coordinate(j), spec.delta, spec.blend_order);
    }
  }
  // Boundary samples are zero by construction of the profiles.
  SineField f = forward_transform(g, spec.N);
  project_degenerate(f);
  return f;
}

double check_degeneracy(const SineField& omega, int intervals) {
  const int n = omega.order();
  if (intervals <= 0) intervals = 2 * n;
  std::vector<double> b(n, 0.0);
  for (int m = 1; m <= n; ++m) {
    for (int k = 1; k <= n; ++k) b[k - 1] += m * omega.at(m, k);
  }
  double sup = 0.0;
  for (int j = 1; j < intervals; ++j) {
    const double x2 = j * kPi / intervals;
    double v = 0.0;
    for (int k = 1; k <= n; ++k) v += b[k - 1] * std::sin(k * x2);
    sup = std::max(sup, std::abs(v));
  }
  return sup;
}

InitialDataChecks check_initial_data(const InitialDataSpec& spec, const SineField& omega0) {
  validate(spec);
  InitialDataChecks c;
  const GridField g = inverse_transform(omega0, spec.N_g);
  c.min_value = 1.0;
  c.max_value = 0.0;
  c.exact_min = 1.0;
  c.exact_max = 0.0;
  long below = 0;
  long cells = 0;
  for (int i = 1; i < spec.N_g; ++i) {
    for (int j = 1; j < spec.N_g; ++j) {
      c.min_value = std::min(c.min_value, g.at(i, j));
      c.max_value = std::max(c.max_value, g.at(i, j));
      const double e = omega0_value(spec, g.coordinate(i), g.coordinate(j));
      c.exact_min = std::min(c.exact_min, e);
      c.exact_max = std::max(c.exact_max, e);
    }
  }
  // Cells of [0, pi)^2 judged by their centers.
  for (int i = 0; i < spec.N_g; ++i) {
    for (int j = 0; j < spec.N_g; ++j) {
      const double h = kPi / spec.N_g;
      ++cells;
      if (omega0_value(spec, (i + 0.5) * h, (j + 0.5) * h) < 1.0) ++below;
    }
  }
  c.defect_fraction = double(below) / double(cells);
  c.defect_bound = 4.0 * kPi * spec.delta / (kPi * kPi);
  c.degeneracy = check_degeneracy(omega0, spec.N_g);
  c.max_gradient = gradient_sup_norm(omega0, spec.N_g);
  c.cells_across_strip = spec.delta * spec.N_g / kPi;
  if (c.cells_across_strip < 8.0) {
    c.warnings.push_back("delta is under-resolved: " + std::to_string(c.cells_across_strip) +
                         " grid cells across the strip (want >= 8)");
  }
  return c;
}

}  // namespace msqg
