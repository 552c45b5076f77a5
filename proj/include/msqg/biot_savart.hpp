#pragma once

// Direct Biot-Savart evaluation for odd-odd vorticity: the symmetrized kernels
// over the first quadrant, their large-|y| asymptotics, and quadrature of the
// velocity over near / medium / far / full regions.
//
// Normalization: the plane kernel is (x2 - y2, -(x1 - y1)) |x - y|^{-2-2a}
// with unit prefactor. Quadrature velocities therefore equal
// analytic_calibration(a) times the spectral velocity.

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "msqg/spectral.hpp"

namespace msqg {

struct ReflectedPoint {
  Point x;
  Point x_tilde;  // (-x1, x2)
  Point x_bar;    // (x1, -x2)
  Point minus_x;

  static ReflectedPoint of(Point x) { return {x, {-x.x1, x.x2}, {x.x1, -x.x2}, {-x.x1, -x.x2}}; }
};

double kernel_K1(Point x, Point y, double alpha);
double kernel_K2(Point x, Point y, double alpha);
inline double kernel_K(int j, Point x, Point y, double alpha) {
  return j == 1 ? kernel_K1(x, y, alpha) : kernel_K2(x, y, alpha);
}

/// (-1)^j 8 (1 + a) x_j y1 y2 |y|^{-4-2a}.
double asymptotic_K(int j, Point x, Point y, double alpha);

/// K_j / asymptotic_K_j - 1.
double relative_kernel_error(int j, Point x, Point y, double alpha);

// Special functions used by the singular lattice correction.
double dirichlet_beta(double s);
/// sum over nonzero integer pairs of (m^2 + n^2)^{-s}, analytically continued
/// to 0 < s < 1 through 4 zeta(s) beta(s).
double epstein_zeta_square(double s);
/// Ratio of the unit-prefactor quadrature velocity to the spectral velocity:
/// 4^{1-a} pi Gamma(1-a) / (2 Gamma(1+a)).
double analytic_calibration(double alpha);

/// Odd-odd 2*pi-periodic scalar field that can be evaluated anywhere.
class FieldSampler {
 public:
  virtual ~FieldSampler() = default;

  virtual double value(Point y) const = 0;
  /// out[i * y2.size() + j] = value({y1[i], y2[j]}).
  virtual void sample_grid(std::span<const double> y1, std::span<const double> y2, std::span<double> out) const;
  /// Default: fourth-order central differences.
  virtual Point gradient(Point y) const;
  /// Points of (0, pi) where the field along an axis is less smooth than
  /// elsewhere; quadrature panels are split there.
  virtual std::vector<double> breakpoints() const { return {}; }
  /// Longest Gauss panel that still resolves the field.
  virtual double max_panel() const { return kPi / 4; }
  /// Collocation cell size behind the field, 0 when it is analytic.
  virtual double cell_size() const { return 0.0; }
};

/// Sine series evaluated by direct summation (separable on tensor grids).
class SeriesSampler final : public FieldSampler {
 public:
  explicit SeriesSampler(SineField f) : f_(std::move(f)) {}
  double value(Point y) const override { return evaluate_offgrid(f_, y); }
  void sample_grid(std::span<const double> y1, std::span<const double> y2, std::span<double> out) const override;
  Point gradient(Point y) const override;
  double max_panel() const override;
  double cell_size() const override { return kPi / (2.0 * f_.order()); }
  const SineField& field() const { return f_; }

 private:
  SineField f_;
};

/// Function given on [0, pi]^2, extended oddly and periodically.
class FunctionSampler final : public FieldSampler {
 public:
  using Fn = std::function<double(double, double)>;
  explicit FunctionSampler(Fn f, std::vector<double> breakpoints = {}, double max_panel = kPi / 4)
      : f_(std::move(f)), breaks_(std::move(breakpoints)), max_panel_(max_panel) {}
  double value(Point y) const override;
  std::vector<double> breakpoints() const override { return breaks_; }
  double max_panel() const override { return max_panel_; }

 private:
  Fn f_;
  std::vector<double> breaks_;
  double max_panel_;
};

/// Maps y to [0, pi]^2 and returns the sign of the odd-odd extension.
double reduce_to_quadrant(Point& y);

enum class PvShape { disk, square };

struct KernelParams {
  double alpha = 0.5;
  double pv_radius = 2.0;  // in near-field lattice cells
  PvShape pv_shape = PvShape::disk;
  int image_radius = 8;    // periodic cells per direction beyond the central one
  int near_cells = 128;    // lattice cells per half-width of the near box
  int gauss_order = 16;
};

enum class RegionKind { near, medium, far, full };
std::string region_name(RegionKind k);

struct RegionSpec {
  RegionKind kind = RegionKind::full;
  double L = 2.0;  // scale parameter for near / medium
};

struct QuadratureVelocity {
  double u1 = 0.0;
  double u2 = 0.0;
  bool under_resolved = false;  // L|x| spans fewer than 4 collocation cells
  double component(int j) const { return j == 1 ? u1 : u2; }
};

/// Largest pv_radius (in lattice cells) accepted; beyond it the exclusion
/// zone would reach the clipped cells at the edge of the smallest near box.
inline constexpr double kMaxPvRadius = 16.0;

QuadratureVelocity velocity_quadrature(const FieldSampler& omega, Point x, const KernelParams& params,
                                       const RegionSpec& region);
/// Grid input is interpolated by its sine series; cell size pi/N_g is used
/// for the resolution warning.
QuadratureVelocity velocity_quadrature(const GridField& omega, Point x, const KernelParams& params,
                                       const RegionSpec& region);

/// Least-squares ratio of quadrature to spectral velocity over the points.
struct Calibration {
  double constant = 0.0;
  double max_relative_error = 0.0;  // of quad vs constant * spectral, per component
  int samples = 0;
};
Calibration fit_calibration(const FieldSampler& omega, const SineField& spectral_omega, std::span<const Point> points,
                            const KernelParams& params);

}  // namespace msqg
