#pragma once

// Degenerate initial vorticity: a product P(x1) Q(x2) of one-dimensional
// profiles that equal (s/delta)^3 and s/delta near both ends of [0, pi], 1 on
// [delta, pi - delta], and polynomial bridges in between. The monomial
// delta^-4 x1^3 x2 therefore holds exactly on [0, delta/2]^2.

#include <string>
#include <vector>

#include "msqg/biot_savart.hpp"
#include "msqg/spectral.hpp"

namespace msqg {

struct InitialDataSpec {
  double delta = 0.25;
  double origin_patch_radius = -1.0;  // < 0 means delta / 2
  int blend_order = 4;                // smoothness of the bridges: 2 or 4
  int N = 256;
  int N_g = 512;
  double delta_max = kPi / 8;

  double patch_radius() const { return origin_patch_radius < 0.0 ? 0.5 * delta : origin_patch_radius; }
};

/// Throws InvalidArgument when the spec is inconsistent.
void validate(const InitialDataSpec& spec);

/// One-dimensional profiles on [0, pi] (cubic and linear at the ends).
double cubic_profile(double s, double delta, int blend_order);
double linear_profile(double s, double delta, int blend_order);

/// Exact omega_0 on [0, pi]^2.
double omega0_value(const InitialDataSpec& spec, double x1, double x2);

/// omega_0 as an analytic sampler (kinks at delta/2, delta, pi-delta, pi-delta/2).
FunctionSampler omega0_sampler(const InitialDataSpec& spec);

/// Samples on the N_g grid, forward transform to order N, then the
/// least-squares projection enforcing sum_m m a_mn = 0 for every n.
SineField build_omega0(const InitialDataSpec& spec);

/// Orthogonal projection onto sine fields with d1 f(0, x2) = 0 identically.
void project_degenerate(SineField& f);

/// max over grid x2 of |d1 omega(0, x2)|.
double check_degeneracy(const SineField& omega, int intervals = 0);

struct InitialDataChecks {
  double min_value = 0.0;           // over interior collocation points of the series
  double max_value = 0.0;
  double exact_min = 0.0;           // of the exact construction on the grid
  double exact_max = 0.0;
  double defect_fraction = 0.0;     // grid cells in [0,pi)^2 where omega_0 < 1
  double defect_bound = 0.0;        // 4 pi delta / pi^2
  double degeneracy = 0.0;
  double max_gradient = 0.0;
  double cells_across_strip = 0.0;  // delta / (pi / N_g)
  std::vector<std::string> warnings;

  double degeneracy_relative() const { return max_gradient > 0.0 ? degeneracy / max_gradient : 0.0; }
  bool range_ok(double tol) const { return min_value >= -tol && max_value <= 1.0 + tol; }
};

InitialDataChecks check_initial_data(const InitialDataSpec& spec, const SineField& omega0);

}  // namespace msqg
