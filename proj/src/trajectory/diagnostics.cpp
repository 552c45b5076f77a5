#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "msqg/regression.hpp"
#include "msqg/trajectory.hpp"

namespace msqg {

std::string stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::horizon: return "horizon";
    case StopReason::x2_reaches_x10: return "x2_reaches_x10";
    case StopReason::hessian_threshold: return "hessian_threshold";
  }
  return "?";
}

StoppingTime stopping_time(const TrajectoryState& path, const std::vector<double>& hessian_times,
                           const std::vector<double>& hessian, double T, double x1_0, double growth_threshold) {
  require(hessian_times.size() == hessian.size(), "hessian series needs one time per value");
  StoppingTime s{T, StopReason::horizon};
  const auto& h = path.history;
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (h[k].time > T) break;
    if (h[k].position.x2 >= x1_0) {
      double t = h[k].time;
      if (k > 0 && h[k - 1].position.x2 < x1_0) {
        const double a = h[k - 1].position.x2, b = h[k].position.x2;
        t = h[k - 1].time + (x1_0 - a) / (b - a) * (h[k].time - h[k - 1].time);
      }
      if (t < s.T0) s = {t, StopReason::x2_reaches_x10};
      break;
    }
  }
  if (!hessian.empty()) {
    const double limit = growth_threshold * hessian.front();
    for (std::size_t k = 0; k < hessian.size(); ++k) {
      if (hessian_times[k] > T) break;
      if (hessian[k] >= limit) {
        if (hessian_times[k] < s.T0) s = {hessian_times[k], StopReason::hessian_threshold};
        break;
      }
    }
  }
  return s;
}

RatioMonitor medium_ratio_monitor(const TrajectoryState& path, const std::vector<TimedField>& snapshots, double alpha,
                                  double L, const KernelParams& params, bool check_dominance, int max_samples) {
  require_alpha_open(alpha);
  require(L >= 2.0, "L must be at least 2");
  KernelParams p = params;
  p.alpha = alpha;
  RatioMonitor out;
  std::size_t k = 0;
  const std::size_t n = snapshots.size();
  const std::size_t stride = max_samples > 0 && n > static_cast<std::size_t>(max_samples)
                                 ? (n + static_cast<std::size_t>(max_samples) - 1) / static_cast<std::size_t>(max_samples)
                                 : 1;
  for (std::size_t si = 0; si < n; si += stride) {
    const auto& snap = snapshots[si];
    const double tol = 1e-9 * std::max(1.0, std::abs(snap.time));
    while (k < path.history.size() && path.history[k].time < snap.time - tol) ++k;
    char note[160];
    if (k == path.history.size() || std::abs(path.history[k].time - snap.time) > tol) {
      std::snprintf(note, sizeof note, "t = %.6g: no trajectory sample at the snapshot time", snap.time);
      out.skipped.push_back(note);
      continue;
    }
    const Point x = path.history[k].position;
    if (L * x.norm() > 1.0) {
      std::snprintf(note, sizeof note, "t = %.6g: L|x| = %.4g exceeds 1", snap.time, L * x.norm());
      out.skipped.push_back(note);
      continue;
    }
    if (x.x1 <= 0.0 || x.x2 <= 0.0) {
      std::snprintf(note, sizeof note, "t = %.6g: position on a symmetry axis", snap.time);
      out.skipped.push_back(note);
      continue;
    }
    const SeriesSampler w(snap.omega);
    const auto med = velocity_quadrature(w, x, p, {RegionKind::medium, L});
    if (med.u2 == 0.0) {
      std::snprintf(note, sizeof note, "t = %.6g: u2^med vanishes", snap.time);
      out.skipped.push_back(note);
      continue;
    }
    RatioSample r;
    r.time = snap.time;
    r.position = x;
    r.ratio = -med.u1 * x.x2 / (x.x1 * med.u2);
    if (check_dominance) {
      const auto near = velocity_quadrature(w, x, p, {RegionKind::near, L});
      const auto far = velocity_quadrature(w, x, p, {RegionKind::far, L});
      r.medium_dominates = std::abs(near.u1) + std::abs(far.u1) <= -med.u1 / L &&
                           std::abs(near.u2) + std::abs(far.u2) <= med.u2 / L;
    }
    out.max_deviation = std::max(out.max_deviation, std::abs(r.ratio - 1.0));
    out.samples.push_back(r);
  }
  return out;
}

GrowthRecord fit_gamma(std::vector<double> times, std::vector<double> hessian, double transient) {
  require(times.size() == hessian.size(), "growth series needs one time per value");
  require(transient >= 0.0 && transient < 1.0, "transient fraction must lie in [0, 1)");
  require(!times.empty(), "growth series is empty");
  for (double h : hessian) require(h > 0.0 && std::isfinite(h), "hessian values must be positive");
  GrowthRecord g;
  g.times = std::move(times);
  g.hessian_sup = std::move(hessian);
  g.fit_start = g.times.front() + transient * (g.times.back() - g.times.front());
  g.fit_end = g.times.back();
  std::vector<double> t, y;
  for (std::size_t k = 0; k < g.times.size(); ++k) {
    if (g.times[k] >= g.fit_start) {
      t.push_back(g.times[k]);
      y.push_back(std::log(g.hessian_sup[k]));
    }
  }
  require(t.size() >= 10, "growth fit needs at least 10 samples in the window, got " + std::to_string(t.size()));
  const LinearFit f = fit_line(t, y);
  g.fitted_gamma = f.slope;
  g.fit_r2 = f.r2;
  g.fit_samples = f.samples;
  return g;
}

namespace {
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryState& t) {
  std::ofstream out(path);
  require(static_cast<bool>(out), "cannot write " + path.string());
  out << "time,x1,x2,u1,u2,r,omega\n";
  for (const auto& s : t.history) {
    out << num(s.time) << ',' << num(s.position.x1) << ',' << num(s.position.x2) << ',' << num(s.velocity.x1) << ','
        << num(s.velocity.x2) << ',' << num(s.ratio) << ',' << num(s.omega) << '\n';
  }
}

void write_growth_csv(const std::filesystem::path& path, const GrowthRecord& g) {
  std::ofstream out(path);
  require(static_cast<bool>(out), "cannot write " + path.string());
  out << "time,hessian_sup\n";
  for (std::size_t k = 0; k < g.times.size(); ++k) out << num(g.times[k]) << ',' << num(g.hessian_sup[k]) << '\n';
}

}  // namespace msqg
