#include <algorithm>
#include <cmath>
#include <vector>

#include "msqg/biot_savart.hpp"

namespace msqg {
namespace {

// sin(m t) for m = 1..order, all t; row-major [t][m].
std::vector<double> sine_table(std::span<const double> t, int order) {
  std::vector<double> s(t.size() * static_cast<std::size_t>(order));
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (int m = 1; m <= order; ++m) s[i * order + (m - 1)] = std::sin(m * t[i]);
  }
  return s;
}

}  // namespace

double reduce_to_quadrant(Point& y) {
  double sign = 1.0;
  for (double* c : {&y.x1, &y.x2}) {
    *c = std::remainder(*c, 2.0 * kPi);
    if (*c < 0.0) {
      *c = -*c;
      sign = -sign;
    }
  }
  return sign;
}

void FieldSampler::sample_grid(std::span<const double> y1, std::span<const double> y2, std::span<double> out) const {
  for (std::size_t i = 0; i < y1.size(); ++i) {
    for (std::size_t j = 0; j < y2.size(); ++j) out[i * y2.size() + j] = value({y1[i], y2[j]});
  }
}

Point FieldSampler::gradient(Point y) const {
  const double e = std::min(1e-3, 0.01 * max_panel());
  auto d = [&](Point dir) {
    const double f1 = value(y + e * dir) - value(y - e * dir);
    const double f2 = value(y + 2.0 * e * dir) - value(y - 2.0 * e * dir);
    return (8.0 * f1 - f2) / (12.0 * e);
  };
  return {d({1.0, 0.0}), d({0.0, 1.0})};
}

void SeriesSampler::sample_grid(std::span<const double> y1, std::span<const double> y2, std::span<double> out) const {
  const int n = f_.order();
  const auto s1 = sine_table(y1, n);
  const auto s2 = sine_table(y2, n);
  // t[m][j] = sum_n a_mn sin(n y2_j)
  std::vector<double> t(static_cast<std::size_t>(n) * y2.size(), 0.0);
  for (int m = 0; m < n; ++m) {
    for (std::size_t j = 0; j < y2.size(); ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += f_.coeffs()[static_cast<std::size_t>(m) * n + k] * s2[j * n + k];
      t[m * y2.size() + j] = acc;
    }
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < y1.size(); ++i) {
    double* row = out.data() + i * y2.size();
    for (int m = 0; m < n; ++m) {
      const double s = s1[i * n + m];
      const double* tm = t.data() + m * y2.size();
      for (std::size_t j = 0; j < y2.size(); ++j) row[j] += s * tm[j];
    }
  }
}

Point SeriesSampler::gradient(Point y) const {
  const MixedField w = MixedField::from(f_);
  return {evaluate_offgrid(spectral_derivative(w, 1, 1), y), evaluate_offgrid(spectral_derivative(w, 2, 1), y)};
}

// Gauss panels of length 12/N keep sin(N y) well inside the exactness range.
double SeriesSampler::max_panel() const { return std::min(kPi / 4, 12.0 / f_.order()); }

double FunctionSampler::value(Point y) const {
  const double sign = reduce_to_quadrant(y);
  return sign * f_(y.x1, y.x2);
}

}  // namespace msqg
