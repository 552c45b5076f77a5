#pragma once

// Odd-odd periodic fields on the torus [-pi, pi)^2, stored as double sine
// series over the fundamental quadrant [0, pi]^2.

#include <cstddef>
#include <span>
#include <vector>

#include "msqg/core.hpp"

namespace msqg {

/// f(x) = sum_{m,n=1..N} a_mn sin(m x1) sin(n x2). Coefficients are stored
/// row-major in m, i.e. a_mn lives at index (m-1)*N + (n-1).
class SineField {
 public:
  SineField() = default;
  explicit SineField(int order);
  SineField(int order, std::vector<double> coeffs);

  int order() const { return order_; }
  double& at(int m, int n) { return coeffs_[index(m, n)]; }
  double at(int m, int n) const { return coeffs_[index(m, n)]; }
  std::span<double> coeffs() { return coeffs_; }
  std::span<const double> coeffs() const { return coeffs_; }

  bool all_finite() const;
  /// Copy truncated or zero-padded to a different order.
  SineField resized(int order) const;

 private:
  std::size_t index(int m, int n) const {
    return static_cast<std::size_t>(m - 1) * static_cast<std::size_t>(order_) + static_cast<std::size_t>(n - 1);
  }
  int order_ = 0;
  std::vector<double> coeffs_;
};

/// Samples on the uniform grid x_i = i*pi/N_g, i = 0..N_g, in both directions.
/// Values are stored row-major in i (the x1 index).
class GridField {
 public:
  GridField() = default;
  explicit GridField(int intervals);

  int intervals() const { return intervals_; }
  int points() const { return intervals_ + 1; }
  double spacing() const { return kPi / intervals_; }
  double coordinate(int i) const { return i * spacing(); }

  double& at(int i, int j) { return values_[index(i, j)]; }
  double at(int i, int j) const { return values_[index(i, j)]; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  double max_abs() const;
  /// Midpoint-style L2 norm over [0, pi]^2: sqrt(h^2 * sum of squares).
  double l2_norm() const;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(points()) + static_cast<std::size_t>(j);
  }
  int intervals_ = 0;
  std::vector<double> values_;
};

enum class Basis { sine, cosine };

/// Coefficients c_mn (m, n = 1..N) multiplying b1(m x1) b2(n x2) where b1, b2
/// are sine or cosine. Produced by differentiating a SineField.
struct MixedField {
  int order = 0;
  Basis basis1 = Basis::sine;
  Basis basis2 = Basis::sine;
  std::vector<double> coeffs;

  static MixedField from(const SineField& f);
  double at(int m, int n) const {
    return coeffs[static_cast<std::size_t>(m - 1) * static_cast<std::size_t>(order) + static_cast<std::size_t>(n - 1)];
  }
};

struct VelocityField {
  GridField u1;
  GridField u2;
  double alpha = 0.0;
};

/// Interpolating sine coefficients of grid samples, truncated to `order`.
/// Requires intervals >= 2 * order.
SineField forward_transform(const GridField& g, int order);
inline SineField forward_transform(const GridField& g) { return forward_transform(g, g.intervals() / 2); }

GridField inverse_transform(const SineField& f, int intervals);

/// Pointwise evaluation of any mixed sine/cosine series on the grid.
GridField evaluate_on_grid(const MixedField& f, int intervals);

/// a_mn -> a_mn / (m^2 + n^2)^(1 - alpha). alpha = 0 is the Euler limit.
SineField fractional_inverse_laplacian(const SineField& f, double alpha);

/// Term-by-term derivative along axis 1 or 2 of order 1 or 2.
MixedField spectral_derivative(const MixedField& f, int axis, int order);
inline MixedField spectral_derivative(const SineField& f, int axis, int order) {
  return spectral_derivative(MixedField::from(f), axis, order);
}

/// Stream function coefficients psi and the velocity u = (-d2 psi, d1 psi).
struct VelocityCoefficients {
  MixedField u1;  // sin(m x1) cos(n x2)
  MixedField u2;  // cos(m x1) sin(n x2)
};
VelocityCoefficients velocity_coefficients(const SineField& omega, double alpha);

VelocityField velocity_from_vorticity(const SineField& omega, double alpha, int intervals);

/// Direct summation of the series at an arbitrary point (periodic extension).
double evaluate_offgrid(const SineField& f, Point x);
double evaluate_offgrid(const MixedField& f, Point x);

/// Max over grid points of the largest |d11|, |d12|, |d22|. A lower bound for
/// the true sup norm that converges as the grid is refined.
double hessian_sup_norm(const SineField& omega, int intervals);

/// Max over grid points of |d1 omega| and |d2 omega|.
double gradient_sup_norm(const SineField& omega, int intervals);

/// (pi^2 / 4) * sum a_mn^2, the L2 norm squared over [0, pi]^2.
double spectral_l2_squared(const SineField& f);

}  // namespace msqg
