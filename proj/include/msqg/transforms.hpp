#pragma once

// FFTW-backed sine/cosine synthesis and analysis on the grid x_i = i*pi/N_g.
// Two-dimensional transforms are done as two batches of contiguous 1D r2r
// transforms with a transpose in between, transforming only the N nonzero
// coefficient rows in the first pass. Instances are cached per thread and
// per grid size; plan creation is serialized because the FFTW planner is not
// reentrant. All plans use FFTW_ESTIMATE so results are reproducible bit for
// bit from run to run.

#include <map>
#include <memory>
#include <span>
#include <tuple>

#include "msqg/spectral.hpp"

namespace msqg {

class SineTransforms {
 public:
  /// Thread-local instance for the given number of grid intervals.
  static SineTransforms& for_grid(int intervals);

  explicit SineTransforms(int intervals);
  ~SineTransforms();
  SineTransforms(const SineTransforms&) = delete;
  SineTransforms& operator=(const SineTransforms&) = delete;

  int intervals() const { return intervals_; }
  /// Interior points per axis, N_g - 1.
  int interior() const { return intervals_ - 1; }

  /// Evaluate the series with the given bases at interior points
  /// (i, j = 1..N_g-1) into out of size (N_g-1)^2, row-major in i, or
  /// row-major in j when `transposed`.
  void synthesize_interior(std::span<const double> coeffs, int order, Basis b1, Basis b2, std::span<double> out,
                           bool transposed = false);

  /// Evaluate on every grid point including both boundaries.
  void synthesize_full(std::span<const double> coeffs, int order, Basis b1, Basis b2, GridField& out);

  /// Sine-sine coefficients (truncated to order) of interior samples laid
  /// out as synthesize_interior would produce them.
  void analyze_interior(std::span<const double> values, int order, std::span<double> coeffs,
                        bool transposed = false);

 private:
  struct Plan;
  double* run(Basis kind, int batch, double* data);
  /// Leaves b_ holding native-point values, b_[j][i], row length of axis 1.
  void synthesize_native(std::span<const double> coeffs, int order, Basis b1, Basis b2);

  int intervals_;
  double* a_ = nullptr;
  double* b_ = nullptr;
  std::map<std::tuple<int, int, int>, std::unique_ptr<Plan>> plans_;  // (kind, batch, buffer)
};

}  // namespace msqg
