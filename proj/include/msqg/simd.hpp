#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference version and,
// where the CPU supports it, an AVX2/FMA version selected at runtime. The two
// are required to agree to rounding (see tests/test_simd.cpp).

#include <cstddef>
#include <span>
#include <string_view>

namespace msqg::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// True when the variant was compiled in and the running CPU supports it.
bool isa_available(Isa isa);

/// Variant used by the library. Defaults to the best available; the
/// environment variable MSQG_SIMD=scalar|avx2 overrides at first use.
Isa active_isa();

/// Test hook. Throws if the variant is unavailable.
void set_active_isa(Isa isa);

/// Partial sums of a kernel row: sum_j w_j * k(x, (y1, y2_j)) * omega_j for
/// both velocity components.
struct KernelSums {
  double s1 = 0.0;
  double s2 = 0.0;
};

/// Arguments for one row of a tensor-product quadrature (fixed y1, varying y2).
struct KernelRow {
  double x1 = 0.0;
  double x2 = 0.0;
  double y1 = 0.0;
  std::span<const double> y2;
  std::span<const double> weight;  // per-node weight (already includes the y1 weight)
  std::span<const double> omega;   // sampled vorticity at the nodes
  double exponent = 0.0;           // -(1 + alpha): power applied to squared distances
};

struct KernelTable {
  Isa isa;

  // out = a * x + b * y
  void (*lincomb)(std::span<double> out, double a, std::span<const double> x, double b,
                  std::span<const double> y);
  // y += a * x
  void (*axpy)(std::span<double> y, double a, std::span<const double> x);
  // y *= m (elementwise)
  void (*multiply)(std::span<double> y, std::span<const double> m);
  // out = -(u1 * w1 + u2 * w2)
  void (*advection)(std::span<double> out, std::span<const double> u1, std::span<const double> w1,
                    std::span<const double> u2, std::span<const double> w2);
  double (*max_abs)(std::span<const double> x);
  double (*sum_squares)(std::span<const double> x);

  // Unsymmetrized plane kernel: s1 += w (x2 - y2) |x - y|^{-2-2a} omega,
  // s2 += -w (x1 - y1) |x - y|^{-2-2a} omega. Nodes with zero weight are
  // skipped even when they coincide with x.
  KernelSums (*plane_kernel_row)(const KernelRow& row);

  // Odd-odd symmetrized kernels K1, K2 over the first quadrant.
  KernelSums (*symmetric_kernel_row)(const KernelRow& row);
};

const KernelTable& table(Isa isa);
const KernelTable& active();

}  // namespace msqg::simd
