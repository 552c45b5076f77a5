#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "msqg/biot_savart.hpp"
#include "msqg/parallel.hpp"
#include "msqg/simd.hpp"

// Three discretizations, all with the unit-prefactor kernel:
//  - a lattice centered at x for boxes containing the singular point, with the
//    k = 0 cell dropped and the lattice-sum defect of the linear part of
//    omega restored through the Epstein zeta function;
//  - composite tensor Gauss-Legendre elsewhere, panels split at the field's
//    kinks and graded by distance from x;
//  - periodic reuse of omega samples across image cells.

namespace msqg {
namespace {

struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

const GaussRule& gauss_rule(int n) {
  thread_local std::map<int, GaussRule> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule r;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      const double p = std::legendre(n, x);
      const double p1 = std::legendre(n - 1, x);
      dp = n * (x * p - p1) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.x.push_back(x);
    r.w.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  }
  return cache.emplace(n, std::move(r)).first->second;
}

struct Nodes {
  std::vector<double> y;
  std::vector<double> w;
  std::size_t size() const { return y.size(); }
};

// Panel edges of [lo, hi]: split at the breakpoints, then bisect until each
// panel is no longer than max_len and no longer than its distance to
// `focus` (but never below dmin).
std::vector<double> partition(double lo, double hi, std::vector<double> breaks, double max_len,
                              double focus = std::numeric_limits<double>::quiet_NaN(), double dmin = 0.0) {
  const double tol = 1e-12 * std::max(1.0, hi - lo);
  std::vector<double> edges{lo, hi};
  for (double b : breaks) {
    if (b > lo + tol && b < hi - tol) edges.push_back(b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(), [&](double a, double b) { return b - a < tol; }), edges.end());

  std::vector<double> out{edges.front()};
  auto split = [&](auto&& self, double p, double q) -> void {
    double limit = max_len;
    if (!std::isnan(focus)) {
      const double dist = (focus >= p && focus <= q) ? 0.0 : std::min(std::abs(p - focus), std::abs(q - focus));
      limit = std::min(limit, std::max(dist, dmin));
    }
    if (q - p > limit * (1.0 + 1e-12)) {
      const double mid = 0.5 * (p + q);
      self(self, p, mid);
      self(self, mid, q);
    } else {
      out.push_back(q);
    }
  };
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) split(split, edges[i], edges[i + 1]);
  return out;
}

Nodes gauss_nodes(const std::vector<double>& edges, int order) {
  const auto& rule = gauss_rule(order);
  Nodes n;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double c = 0.5 * (edges[p] + edges[p + 1]);
    const double h = 0.5 * (edges[p + 1] - edges[p]);
    for (int i = 0; i < order; ++i) {
      n.y.push_back(c + h * rule.x[i]);
      n.w.push_back(h * rule.w[i]);
    }
  }
  return n;
}

// Kinks of the odd 2*pi-periodic extension that fall in [lo, hi].
std::vector<double> periodic_breaks(const FieldSampler& s, double lo, double hi) {
  std::vector<double> out;
  const auto kinks = s.breakpoints();
  for (int m = static_cast<int>(std::floor(lo / kPi)) - 1; m <= static_cast<int>(std::ceil(hi / kPi)) + 1; ++m) {
    out.push_back(m * kPi);
    if (m % 2 != 0) continue;
    for (double k : kinks) {
      out.push_back(m * kPi + k);
      out.push_back(m * kPi - k);
    }
  }
  return out;
}

double panel_cap(const FieldSampler& s) { return std::min(kPi / 4, s.max_panel()); }

struct Sum {
  double u1 = 0.0;
  double u2 = 0.0;
  void add(simd::KernelSums k) {
    u1 += k.s1;
    u2 += k.s2;
  }
};

// Lattice y = x + h k over the box [lo1, hi1] x [lo2, hi2] (which must contain
// x with the exclusion zone well inside). Cells are clipped at the box edges.
struct LatticeAxis {
  Nodes nodes;
  std::vector<int> k;
};

LatticeAxis lattice_axis(double xj, double h, double lo, double hi) {
  LatticeAxis a;
  const int kmin = static_cast<int>(std::floor((lo - xj) / h - 0.5)) + 1;
  const int kmax = static_cast<int>(std::ceil((hi - xj) / h + 0.5)) - 1;
  for (int k = kmin; k <= kmax; ++k) {
    const double left = std::max(xj + h * (k - 0.5), lo);
    const double right = std::min(xj + h * (k + 0.5), hi);
    if (right <= left) continue;
    a.nodes.y.push_back(k == 0 ? xj : 0.5 * (left + right));
    a.nodes.w.push_back(right - left);
    a.k.push_back(k);
  }
  return a;
}

Sum lattice_sum(const FieldSampler& omega, Point x, double lo1, double hi1, double lo2, double hi2,
                const KernelParams& p) {
  const double h = std::min(hi1 - lo1, hi2 - lo2) / (2.0 * p.near_cells);
  const auto a1 = lattice_axis(x.x1, h, lo1, hi1);
  const auto a2 = lattice_axis(x.x2, h, lo2, hi2);
  const std::size_t n2 = a2.nodes.size();
  std::vector<double> om(a1.nodes.size() * n2);
  omega.sample_grid(a1.nodes.y, a2.nodes.y, om);

  const double wx = omega.value(x);
  const double r = p.pv_radius;
  auto in_pv = [&](int k1, int k2) {
    return p.pv_shape == PvShape::disk ? double(k1) * k1 + double(k2) * k2 <= r * r
                                       : std::max(std::abs(k1), std::abs(k2)) <= r;
  };

  const auto& kt = simd::active();
  Sum sum;
  std::vector<double> wrow(n2);
  for (std::size_t i = 0; i < a1.nodes.size(); ++i) {
    const int k1 = a1.k[i];
    double* orow = om.data() + i * n2;
    for (std::size_t j = 0; j < n2; ++j) {
      wrow[j] = a1.nodes.w[i] * a2.nodes.w[j];
      if (std::abs(k1) <= r && in_pv(k1, a2.k[j])) orow[j] -= wx;  // symmetric pairing about x
      if (k1 == 0 && a2.k[j] == 0) wrow[j] = 0.0;
    }
    sum.add(kt.plane_kernel_row({x.x1, x.x2, a1.nodes.y[i], a2.nodes.y, wrow, {orow, n2}, -(1.0 + p.alpha)}));
  }

  // The midpoint lattice misses h^{2-2a} Z(a)/2 times the gradient for the
  // homogeneous part (z2^2 resp. z1^2) |z|^{-2-2a}.
  const Point g = omega.gradient(x);
  const double corr = std::pow(h, 2.0 - 2.0 * p.alpha) * 0.5 * epstein_zeta_square(p.alpha);
  sum.u1 += g.x2 * corr;
  sum.u2 -= g.x1 * corr;
  return sum;
}

Sum near_region(const FieldSampler& omega, Point x, double a, const KernelParams& p) {
  // [0, a]^2 with the odd reflections is the plane box [-a, a]^2.
  return lattice_sum(omega, x, -a, a, -a, a, p);
}

Sum medium_region(const FieldSampler& omega, Point x, double a, const KernelParams& p) {
  const double dmin = a - std::max(x.x1, x.x2);
  require(dmin > 0.0, "medium region: x must lie inside the excluded square [0, L|x|]^2");
  std::vector<double> br = periodic_breaks(omega, 0.0, kPi);
  br.push_back(a);
  const Nodes n1 = gauss_nodes(partition(0.0, kPi, br, panel_cap(omega), x.x1, dmin), p.gauss_order);
  const Nodes n2 = gauss_nodes(partition(0.0, kPi, br, panel_cap(omega), x.x2, dmin), p.gauss_order);
  std::vector<double> om(n1.size() * n2.size());
  omega.sample_grid(n1.y, n2.y, om);

  const auto& kt = simd::active();
  Sum sum;
  std::vector<double> wrow(n2.size());
  for (std::size_t i = 0; i < n1.size(); ++i) {
    const bool in_strip = n1.y[i] < a;
    for (std::size_t j = 0; j < n2.size(); ++j) {
      wrow[j] = (in_strip && n2.y[j] < a) ? 0.0 : n1.w[i] * n2.w[j];
    }
    sum.add(kt.symmetric_kernel_row(
        {x.x1, x.x2, n1.y[i], n2.y, wrow, {om.data() + i * n2.size(), n2.size()}, -(1.0 + p.alpha)}));
  }
  return sum;
}

// [0, (2R+1) pi)^2 minus [0, pi)^2 with the symmetrized kernel. Block 0 of an
// axis is [0, pi); block b >= 1 is [(2b-1) pi, (2b+1) pi) = 2 b pi + [-pi, pi).
Sum far_region(const FieldSampler& omega, Point x, const KernelParams& p) {
  const double dmin = std::max(kPi - std::max(x.x1, x.x2), 1e-3);
  const Nodes half =
      gauss_nodes(partition(0.0, kPi, periodic_breaks(omega, 0.0, kPi), panel_cap(omega), kPi, dmin), p.gauss_order);
  const std::size_t nh = half.size();
  Nodes period;
  for (std::size_t i = nh; i-- > 0;) {
    period.y.push_back(-half.y[i]);
    period.w.push_back(half.w[i]);
  }
  period.y.insert(period.y.end(), half.y.begin(), half.y.end());
  period.w.insert(period.w.end(), half.w.begin(), half.w.end());
  const std::size_t np = period.size();
  std::vector<double> om(np * np);
  omega.sample_grid(period.y, period.y, om);

  const int R = p.image_radius;
  struct Block {
    std::size_t first;  // index into `period`
    std::size_t count;
    std::vector<double> y;
  };
  std::vector<Block> blocks;
  for (int b = 0; b <= R; ++b) {
    Block blk{b == 0 ? nh : 0, b == 0 ? nh : np, {}};
    for (std::size_t i = 0; i < blk.count; ++i) blk.y.push_back(2.0 * kPi * b + period.y[blk.first + i]);
    blocks.push_back(std::move(blk));
  }

  const auto& kt = simd::active();
  Sum sum;
  std::vector<double> wrow(np);
  for (int b1 = 0; b1 <= R; ++b1) {
    const Block& B1 = blocks[b1];
    for (std::size_t ii = 0; ii < B1.count; ++ii) {
      const std::size_t i = B1.first + ii;
      for (int b2 = 0; b2 <= R; ++b2) {
        if (b1 == 0 && b2 == 0) continue;
        const Block& B2 = blocks[b2];
        for (std::size_t jj = 0; jj < B2.count; ++jj) wrow[jj] = period.w[i] * period.w[B2.first + jj];
        sum.add(kt.symmetric_kernel_row({x.x1, x.x2, B1.y[ii], B2.y, {wrow.data(), B2.count},
                                         {om.data() + i * np + B2.first, B2.count}, -(1.0 + p.alpha)}));
      }
    }
  }
  return sum;
}

// Whole-plane integral over the (2R+1)^2 period cells centered at c, where
// c_j in {0, pi} is the multiple of pi nearest to x_j, so x sits at least
// pi/2 from the central cell's edges.
Sum full_region(const FieldSampler& omega, Point x, const KernelParams& p) {
  const double c1 = x.x1 > kPi / 2 ? kPi : 0.0;
  const double c2 = x.x2 > kPi / 2 ? kPi : 0.0;
  const double b = kPi / 2;
  const double cap = panel_cap(omega);
  const auto& kt = simd::active();
  const double e = -(1.0 + p.alpha);

  Sum sum = lattice_sum(omega, x, x.x1 - b, x.x1 + b, x.x2 - b, x.x2 + b, p);

  // Central cell outside the lattice box.
  auto central_axis = [&](double c, double xj) {
    auto br = periodic_breaks(omega, c - kPi, c + kPi);
    br.push_back(xj - b);
    br.push_back(xj + b);
    return gauss_nodes(partition(c - kPi, c + kPi, br, cap, xj, b), p.gauss_order);
  };
  {
    const Nodes n1 = central_axis(c1, x.x1);
    const Nodes n2 = central_axis(c2, x.x2);
    std::vector<double> om(n1.size() * n2.size());
    omega.sample_grid(n1.y, n2.y, om);
    std::vector<double> wrow(n2.size());
    for (std::size_t i = 0; i < n1.size(); ++i) {
      const bool in_strip = std::abs(n1.y[i] - x.x1) < b;
      for (std::size_t j = 0; j < n2.size(); ++j) {
        wrow[j] = (in_strip && std::abs(n2.y[j] - x.x2) < b) ? 0.0 : n1.w[i] * n2.w[j];
      }
      sum.add(kt.plane_kernel_row({x.x1, x.x2, n1.y[i], n2.y, wrow, {om.data() + i * n2.size(), n2.size()}, e}));
    }
  }

  // Image cells: one sampled period reused with shifts 2 pi k.
  auto period_axis = [&](double c) {
    auto br = periodic_breaks(omega, c - kPi, c + kPi);
    for (double& v : br) v -= c;
    return gauss_nodes(partition(-kPi, kPi, br, cap), p.gauss_order);
  };
  const Nodes g1 = period_axis(c1);
  const Nodes g2 = period_axis(c2);
  std::vector<double> y1(g1.size()), y2(g2.size());
  for (std::size_t i = 0; i < g1.size(); ++i) y1[i] = c1 + g1.y[i];
  for (std::size_t j = 0; j < g2.size(); ++j) y2[j] = c2 + g2.y[j];
  std::vector<double> om(g1.size() * g2.size());
  omega.sample_grid(y1, y2, om);

  const int R = p.image_radius;
  std::vector<std::vector<double>> shifted2;
  for (int k2 = -R; k2 <= R; ++k2) {
    std::vector<double> s(g2.size());
    for (std::size_t j = 0; j < g2.size(); ++j) s[j] = y2[j] + 2.0 * kPi * k2;
    shifted2.push_back(std::move(s));
  }
  std::vector<double> wrow(g2.size());
  for (int k1 = -R; k1 <= R; ++k1) {
    for (std::size_t i = 0; i < g1.size(); ++i) {
      for (std::size_t j = 0; j < g2.size(); ++j) wrow[j] = g1.w[i] * g2.w[j];
      const double yy1 = y1[i] + 2.0 * kPi * k1;
      for (int k2 = -R; k2 <= R; ++k2) {
        if (k1 == 0 && k2 == 0) continue;
        sum.add(kt.plane_kernel_row(
            {x.x1, x.x2, yy1, shifted2[k2 + R], wrow, {om.data() + i * g2.size(), g2.size()}, e}));
      }
    }
  }
  return sum;
}

void check_params(const KernelParams& p) {
  require_alpha_open(p.alpha);
  require(p.near_cells >= 8, "near_cells must be at least 8");
  require(p.pv_radius >= 0.0 && p.pv_radius <= std::min(kMaxPvRadius, p.near_cells / 4.0),
          "pv_radius must lie in [0, min(16, near_cells/4)] lattice cells");
  require(p.image_radius >= 1, "image_radius must be at least 1");
  require(p.gauss_order >= 2 && p.gauss_order <= 64, "gauss_order must lie in [2, 64]");
}

}  // namespace

std::string region_name(RegionKind k) {
  switch (k) {
    case RegionKind::near: return "near";
    case RegionKind::medium: return "medium";
    case RegionKind::far: return "far";
    case RegionKind::full: return "full";
  }
  return "?";
}

QuadratureVelocity velocity_quadrature(const FieldSampler& omega, Point x, const KernelParams& params,
                                       const RegionSpec& region) {
  check_params(params);
  require(std::isfinite(x.x1) && std::isfinite(x.x2) && x.x1 >= 0.0 && x.x2 >= 0.0 && x.x1 <= kPi &&
              x.x2 <= kPi,
          "quadrature point must lie in [0, pi]^2");
  QuadratureVelocity out;
  Sum s;
  if (region.kind == RegionKind::near || region.kind == RegionKind::medium) {
    require(region.L > 1.0, "region scale L must exceed 1");
    const double a = region.L * x.norm();
    if (a == 0.0) return out;  // x at the origin: both components vanish
    const double cell = omega.cell_size();
    out.under_resolved = cell > 0.0 && a < 4.0 * cell;
    if (region.kind == RegionKind::near) {
      require(a <= kPi, "near region [0, L|x|]^2 must fit inside [0, pi]^2");
      s = near_region(omega, x, a, params);
    } else {
      require(a < kPi, "medium region is empty: L|x| >= pi");
      s = medium_region(omega, x, a, params);
    }
  } else if (region.kind == RegionKind::far) {
    s = far_region(omega, x, params);
  } else {
    s = full_region(omega, x, params);
  }
  out.u1 = s.u1;
  out.u2 = s.u2;
  return out;
}

QuadratureVelocity velocity_quadrature(const GridField& omega, Point x, const KernelParams& params,
                                       const RegionSpec& region) {
  const SeriesSampler s(forward_transform(omega));
  auto out = velocity_quadrature(s, x, params, region);
  if (region.kind == RegionKind::near || region.kind == RegionKind::medium) {
    out.under_resolved = region.L * x.norm() < 4.0 * omega.spacing();
  }
  return out;
}

Calibration fit_calibration(const FieldSampler& omega, const SineField& spectral_omega, std::span<const Point> points,
                            const KernelParams& params) {
  require(!points.empty(), "calibration needs sample points");
  const auto vc = velocity_coefficients(spectral_omega, params.alpha);
  const int n = static_cast<int>(points.size());
  std::vector<QuadratureVelocity> q(n);
  std::vector<Point> s(n);
  parallel_for(n, [&](int i) {
    q[i] = velocity_quadrature(omega, points[i], params, {RegionKind::full, 2.0});
    s[i] = {evaluate_offgrid(vc.u1, points[i]), evaluate_offgrid(vc.u2, points[i])};
  });
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    num += q[i].u1 * s[i].x1 + q[i].u2 * s[i].x2;
    den += s[i].x1 * s[i].x1 + s[i].x2 * s[i].x2;
  }
  require(den > 0.0, "spectral velocity vanishes at every calibration point");
  Calibration c{num / den, 0.0, n};
  for (int i = 0; i < n; ++i) {
    const Point ref = c.constant * s[i];
    const double err = Point{q[i].u1 - ref.x1, q[i].u2 - ref.x2}.norm();
    c.max_relative_error = std::max(c.max_relative_error, err / std::max(ref.norm(), 1e-300));
  }
  return c;
}

}  // namespace msqg
