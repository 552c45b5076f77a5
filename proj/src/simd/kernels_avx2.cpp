// AVX2/FMA variants. This translation unit is the only one compiled with
// -mavx2 -mfma; nothing here may be called unless the CPU reports AVX2.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "kernels_internal.hpp"

namespace msqg::simd::detail {
namespace {

// Cephes-style double precision log/exp on four lanes. Inputs to vlog must be
// positive normal numbers; vexp clamps its argument to avoid overflow.

inline __m256d int64_to_double(__m256i v) {
  // Exact for |v| < 2^51.
  const __m256d magic = _mm256_set1_pd(6755399441055744.0);  // 2^52 + 2^51
  return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_add_epi64(v, _mm256_castpd_si256(magic))), magic);
}

inline __m256d vlog(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  __m256i exp_bits = _mm256_srli_epi64(bits, 52);
  __m256d e = int64_to_double(_mm256_sub_epi64(exp_bits, _mm256_set1_epi64x(1022)));
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i half_bits = _mm256_set1_epi64x(0x3FE0000000000000LL);
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), half_bits));

  const __m256d sqrth = _mm256_set1_pd(0.70710678118654752440);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d small = _mm256_cmp_pd(m, sqrth, _CMP_LT_OQ);
  e = _mm256_sub_pd(e, _mm256_and_pd(small, one));
  // m < sqrt(1/2): 2m - 1, else m - 1
  const __m256d xm = _mm256_sub_pd(_mm256_add_pd(m, _mm256_and_pd(small, m)), one);

  const __m256d z = _mm256_mul_pd(xm, xm);
  __m256d p = _mm256_set1_pd(1.01875663804580931796E-4);
  p = _mm256_fmadd_pd(p, xm, _mm256_set1_pd(4.97494994976747001425E-1));
  p = _mm256_fmadd_pd(p, xm, _mm256_set1_pd(4.70579119878881725854E0));
  p = _mm256_fmadd_pd(p, xm, _mm256_set1_pd(1.44989225341610930846E1));
  p = _mm256_fmadd_pd(p, xm, _mm256_set1_pd(1.79368678507819816313E1));
  p = _mm256_fmadd_pd(p, xm, _mm256_set1_pd(7.70838733755885391666E0));
  __m256d q = _mm256_add_pd(xm, _mm256_set1_pd(1.12873587189167450590E1));
  q = _mm256_fmadd_pd(q, xm, _mm256_set1_pd(4.52279145837532221105E1));
  q = _mm256_fmadd_pd(q, xm, _mm256_set1_pd(8.29875266912776603211E1));
  q = _mm256_fmadd_pd(q, xm, _mm256_set1_pd(7.11544750618563894466E1));
  q = _mm256_fmadd_pd(q, xm, _mm256_set1_pd(2.31251620126765340583E1));

  __m256d y = _mm256_mul_pd(xm, _mm256_div_pd(_mm256_mul_pd(z, p), q));
  y = _mm256_fnmadd_pd(e, _mm256_set1_pd(2.121944400546905827679e-4), y);
  y = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, y);
  __m256d r = _mm256_add_pd(xm, y);
  return _mm256_fmadd_pd(e, _mm256_set1_pd(0.693359375), r);
}

inline __m256d vexp(__m256d x) {
  x = _mm256_min_pd(x, _mm256_set1_pd(708.0));
  x = _mm256_max_pd(x, _mm256_set1_pd(-708.0));
  const __m256d px = _mm256_floor_pd(
      _mm256_fmadd_pd(x, _mm256_set1_pd(1.4426950408889634073599), _mm256_set1_pd(0.5)));
  x = _mm256_fnmadd_pd(px, _mm256_set1_pd(6.93145751953125E-1), x);
  x = _mm256_fnmadd_pd(px, _mm256_set1_pd(1.42860682030941723212E-6), x);
  const __m256d xx = _mm256_mul_pd(x, x);
  __m256d p = _mm256_set1_pd(1.26177193074810590878E-4);
  p = _mm256_fmadd_pd(p, xx, _mm256_set1_pd(3.02994407707441961300E-2));
  p = _mm256_fmadd_pd(p, xx, _mm256_set1_pd(9.99999999999999999910E-1));
  p = _mm256_mul_pd(p, x);
  __m256d q = _mm256_set1_pd(3.00198505138664455042E-6);
  q = _mm256_fmadd_pd(q, xx, _mm256_set1_pd(2.52448340349684104192E-3));
  q = _mm256_fmadd_pd(q, xx, _mm256_set1_pd(2.27265548208155028766E-1));
  q = _mm256_fmadd_pd(q, xx, _mm256_set1_pd(2.00000000000000000009E0));
  __m256d r = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  r = _mm256_fmadd_pd(_mm256_set1_pd(2.0), r, _mm256_set1_pd(1.0));

  const __m128i n32 = _mm256_cvtpd_epi32(px);
  __m256i n64 = _mm256_cvtepi32_epi64(n32);
  n64 = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(r, _mm256_castsi256_pd(n64));
}

// (r2)^e for r2 > 0
inline __m256d vpow(__m256d r2, __m256d e) { return vexp(_mm256_mul_pd(e, vlog(r2))); }

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  s = _mm_add_sd(s, _mm_unpackhi_pd(s, s));
  return _mm_cvtsd_f64(s);
}

void lincomb(std::span<double> out, double a, std::span<const double> x, double b,
             std::span<const double> y) {
  const std::size_t n = out.size();
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_fmadd_pd(va, _mm256_loadu_pd(&x[i]),
                                      _mm256_mul_pd(vb, _mm256_loadu_pd(&y[i])));
    _mm256_storeu_pd(&out[i], r);
  }
  for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void axpy(std::span<double> y, double a, std::span<const double> x) {
  const std::size_t n = y.size();
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(&y[i], _mm256_fmadd_pd(va, _mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i])));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void multiply(std::span<double> y, std::span<const double> m) {
  const std::size_t n = y.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(&y[i], _mm256_mul_pd(_mm256_loadu_pd(&y[i]), _mm256_loadu_pd(&m[i])));
  }
  for (; i < n; ++i) y[i] *= m[i];
}

void advection(std::span<double> out, std::span<const double> u1, std::span<const double> w1,
               std::span<const double> u2, std::span<const double> w2) {
  const std::size_t n = out.size();
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d s = _mm256_fmadd_pd(_mm256_loadu_pd(&u1[i]), _mm256_loadu_pd(&w1[i]),
                                      _mm256_mul_pd(_mm256_loadu_pd(&u2[i]), _mm256_loadu_pd(&w2[i])));
    _mm256_storeu_pd(&out[i], _mm256_xor_pd(s, sign));
  }
  for (; i < n; ++i) out[i] = -(u1[i] * w1[i] + u2[i] * w2[i]);
}

double max_abs(std::span<const double> x) {
  const std::size_t n = x.size();
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, _mm256_andnot_pd(sign, _mm256_loadu_pd(&x[i])));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double r = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) r = std::max(r, std::abs(x[i]));
  return r;
}

double sum_squares(std::span<const double> x) {
  const std::size_t n = x.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(&x[i]);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

KernelSums plane_kernel_row(const KernelRow& row) {
  const std::size_t n = row.y2.size();
  const __m256d vx2 = _mm256_set1_pd(row.x2);
  const double d1 = row.x1 - row.y1;
  const __m256d vd1 = _mm256_set1_pd(d1);
  const __m256d vd1sq = _mm256_set1_pd(d1 * d1);
  const __m256d ve = _mm256_set1_pd(row.exponent);
  const __m256d floor = _mm256_set1_pd(kMinSquaredDistance);
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d d2 = _mm256_sub_pd(vx2, _mm256_loadu_pd(&row.y2[j]));
    const __m256d r2 = _mm256_max_pd(_mm256_fmadd_pd(d2, d2, vd1sq), floor);
    const __m256d wo = _mm256_mul_pd(_mm256_loadu_pd(&row.weight[j]), _mm256_loadu_pd(&row.omega[j]));
    const __m256d inv = _mm256_mul_pd(vpow(r2, ve), wo);
    acc1 = _mm256_fmadd_pd(d2, inv, acc1);
    acc2 = _mm256_fnmadd_pd(vd1, inv, acc2);
  }
  KernelSums sums{hsum(acc1), hsum(acc2)};
  for (; j < n; ++j) {
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
  const std::size_t n = row.y2.size();
  const double dm1 = row.x1 - row.y1;
  const double dp1 = row.x1 + row.y1;
  const __m256d vdm1 = _mm256_set1_pd(dm1);
  const __m256d vdp1 = _mm256_set1_pd(dp1);
  const __m256d vdm1sq = _mm256_set1_pd(dm1 * dm1);
  const __m256d vdp1sq = _mm256_set1_pd(dp1 * dp1);
  const __m256d vx2 = _mm256_set1_pd(row.x2);
  const __m256d ve = _mm256_set1_pd(row.exponent);
  const __m256d floor = _mm256_set1_pd(kMinSquaredDistance);
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d y2 = _mm256_loadu_pd(&row.y2[j]);
    const __m256d dm2 = _mm256_sub_pd(vx2, y2);
    const __m256d dp2 = _mm256_add_pd(vx2, y2);
    const __m256d dm2sq = _mm256_mul_pd(dm2, dm2);
    const __m256d dp2sq = _mm256_mul_pd(dp2, dp2);
    const __m256d direct = vpow(_mm256_max_pd(_mm256_add_pd(vdm1sq, dm2sq), floor), ve);
    const __m256d tilde = vpow(_mm256_max_pd(_mm256_add_pd(vdp1sq, dm2sq), floor), ve);
    const __m256d bar = vpow(_mm256_max_pd(_mm256_add_pd(vdm1sq, dp2sq), floor), ve);
    const __m256d sum = vpow(_mm256_max_pd(_mm256_add_pd(vdp1sq, dp2sq), floor), ve);
    const __m256d wo = _mm256_mul_pd(_mm256_loadu_pd(&row.weight[j]), _mm256_loadu_pd(&row.omega[j]));
    const __m256d k1 = _mm256_fmsub_pd(dm2, _mm256_sub_pd(direct, tilde),
                                       _mm256_mul_pd(dp2, _mm256_sub_pd(bar, sum)));
    const __m256d k2 = _mm256_fmsub_pd(vdm1, _mm256_sub_pd(direct, bar),
                                       _mm256_mul_pd(vdp1, _mm256_sub_pd(tilde, sum)));
    acc1 = _mm256_fmadd_pd(wo, k1, acc1);
    acc2 = _mm256_fnmadd_pd(wo, k2, acc2);
  }
  KernelSums sums{hsum(acc1), hsum(acc2)};
  for (; j < n; ++j) {
    const double w = row.weight[j];
    if (w == 0.0) continue;
    const double dm2 = row.x2 - row.y2[j];
    const double dp2 = row.x2 + row.y2[j];
    const double e = row.exponent;
    const double direct = std::pow(dm1 * dm1 + dm2 * dm2, e);
    const double tilde = std::pow(dp1 * dp1 + dm2 * dm2, e);
    const double bar = std::pow(dm1 * dm1 + dp2 * dp2, e);
    const double sum = std::pow(dp1 * dp1 + dp2 * dp2, e);
    const double wo = w * row.omega[j];
    sums.s1 += wo * (dm2 * (direct - tilde) - dp2 * (bar - sum));
    sums.s2 -= wo * (dm1 * (direct - bar) - dp1 * (tilde - sum));
  }
  return sums;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable t{Isa::avx2,   lincomb,     axpy,
                             multiply,    advection,   max_abs,
                             sum_squares, plane_kernel_row, symmetric_kernel_row};
  return t;
}

}  // namespace msqg::simd::detail
