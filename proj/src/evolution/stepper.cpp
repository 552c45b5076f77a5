#include <algorithm>
#include <cmath>
#include <vector>

#include "msqg/evolution.hpp"
#include "msqg/initial_data.hpp"
#include "msqg/simd.hpp"
#include "msqg/transforms.hpp"

namespace msqg {

struct Stepper::Buffers {
  SineTransforms& tr;
  std::vector<double> multiplier;  // (m^2 + n^2)^{-(1-a)}
  std::vector<double> u1c, u2c, w1c, w2c;
  std::vector<double> u1, u2, w1, w2, prod;
  SineField k1, k2, k3, k4, tmp;

  Buffers(int order, int intervals, double alpha)
      : tr(SineTransforms::for_grid(intervals)), k1(order), k2(order), k3(order), k4(order), tmp(order) {
    const std::size_t nc = static_cast<std::size_t>(order) * order;
    const std::size_t ng = static_cast<std::size_t>(tr.interior()) * tr.interior();
    multiplier.resize(nc);
    for (int m = 1; m <= order; ++m) {
      for (int n = 1; n <= order; ++n) {
        multiplier[(m - 1) * order + (n - 1)] = std::pow(double(m * m + n * n), -(1.0 - alpha));
      }
    }
    for (auto* v : {&u1c, &u2c, &w1c, &w2c}) v->resize(nc);
    for (auto* v : {&u1, &u2, &w1, &w2, &prod}) v->resize(ng);
  }
};

Stepper::Stepper(int order, int intervals, double alpha) : order_(order), intervals_(intervals), alpha_(alpha) {
  require_alpha_half_open(alpha);
  require(intervals >= 2 * order, "stepper needs N_g >= 2N");
  buf_ = std::make_unique<Buffers>(order, intervals, alpha);
}

Stepper::~Stepper() = default;

void Stepper::rhs(const SineField& w, SineField& out) {
  require(w.order() == order_, "stepper order does not match the field");
  if (out.order() != order_) out = SineField(order_);
  auto& b = *buf_;
  const int n = order_;
  const auto a = w.coeffs();
  for (int m = 1; m <= n; ++m) {
    for (int k = 1; k <= n; ++k) {
      const std::size_t i = static_cast<std::size_t>(m - 1) * n + (k - 1);
      const double psi = a[i] * b.multiplier[i];
      b.u1c[i] = -k * psi;  // sin cos
      b.u2c[i] = m * psi;   // cos sin
      b.w1c[i] = m * a[i];  // cos sin
      b.w2c[i] = k * a[i];  // sin cos
    }
  }
  b.tr.synthesize_interior(b.u1c, n, Basis::sine, Basis::cosine, b.u1, true);
  b.tr.synthesize_interior(b.u2c, n, Basis::cosine, Basis::sine, b.u2, true);
  b.tr.synthesize_interior(b.w1c, n, Basis::cosine, Basis::sine, b.w1, true);
  b.tr.synthesize_interior(b.w2c, n, Basis::sine, Basis::cosine, b.w2, true);
  const auto& kt = simd::active();
  umax_ = std::max(kt.max_abs(b.u1), kt.max_abs(b.u2));
  kt.advection(b.prod, b.u1, b.w1, b.u2, b.w2);
  b.tr.analyze_interior(b.prod, n, out.coeffs(), true);
  if (!std::isfinite(umax_) || !out.all_finite()) throw NumericalError("non-finite values in the nonlinear term");
}

double Stepper::step_rk4(SineField& w, const std::function<double(double)>& choose) {
  auto& b = *buf_;
  const auto& kt = simd::active();
  rhs(w, b.k1);
  const double dt = choose(umax_);
  kt.lincomb(b.tmp.coeffs(), 1.0, w.coeffs(), 0.5 * dt, b.k1.coeffs());
  rhs(b.tmp, b.k2);
  kt.lincomb(b.tmp.coeffs(), 1.0, w.coeffs(), 0.5 * dt, b.k2.coeffs());
  rhs(b.tmp, b.k3);
  kt.lincomb(b.tmp.coeffs(), 1.0, w.coeffs(), dt, b.k3.coeffs());
  rhs(b.tmp, b.k4);
  // w += dt/6 (k1 + 2 k2 + 2 k3 + k4)
  kt.lincomb(b.k2.coeffs(), 1.0, b.k2.coeffs(), 1.0, b.k3.coeffs());
  kt.lincomb(b.k1.coeffs(), 1.0, b.k1.coeffs(), 1.0, b.k4.coeffs());
  kt.axpy(w.coeffs(), dt / 6.0, b.k1.coeffs());
  kt.axpy(w.coeffs(), dt / 3.0, b.k2.coeffs());
  if (filter_) {
    const int n = order_;
    for (int m = 1; m <= n; ++m) {
      for (int k = 1; k <= n; ++k) w.at(m, k) *= std::exp(-36.0 * std::pow(double(std::max(m, k)) / n, 36.0));
    }
  }
  return dt;
}

void Stepper::step_rk4(SineField& w, double dt) {
  step_rk4(w, [dt](double) { return dt; });
}

SineField nonlinear_term(const SineField& omega, double alpha, int intervals) {
  if (intervals == 0) intervals = 2 * omega.order();
  Stepper s(omega.order(), intervals, alpha);
  SineField out(omega.order());
  s.rhs(omega, out);
  return out;
}

SimState step_rk4(const SimState& state, double dt) {
  require(dt > 0.0 && std::isfinite(dt), "time step must be positive");
  SimState next = state;
  Stepper s(state.omega.order(), state.config.N_g, state.config.alpha);
  s.set_filter(state.config.spectral_filter);
  s.step_rk4(next.omega, dt);
  next.time += dt;
  ++next.step_count;
  return next;
}

double cfl_dt_from_speed(double umax, int intervals, double safety, double dt_min, double dt_max) {
  require(safety > 0.0 && safety <= 0.5, "CFL safety must lie in (0, 0.5]");
  if (!(umax > 0.0)) return dt_max;
  return std::clamp(safety * (kPi / intervals) / umax, dt_min, dt_max);
}

double cfl_dt(const VelocityField& u, int intervals, double safety, double dt_min, double dt_max) {
  return cfl_dt_from_speed(std::max(u.u1.max_abs(), u.u2.max_abs()), intervals, safety, dt_min, dt_max);
}

void validate(const ExperimentConfig& c) {
  require_alpha_half_open(c.alpha);
  require(c.N >= 4, "N must be at least 4");
  require(c.N_g >= 2 * c.N, "N_g must be at least 2N");
  require(std::isfinite(c.T) && c.T >= 0.0, "horizon T must be nonnegative");
  require(c.dt_min > 0.0 && c.dt_max >= c.dt_min, "need 0 < dt_min <= dt_max");
  if (c.dt_policy == DtPolicy::fixed) require(c.dt > 0.0, "fixed time step must be positive");
  if (c.dt_policy == DtPolicy::cfl) require(c.cfl_safety > 0.0 && c.cfl_safety <= 0.5, "CFL safety must lie in (0, 0.5]");
  require(c.diag_interval >= 0.0 && c.snapshot_interval >= 0.0, "output intervals must be nonnegative");
  require(c.tail_threshold > 0.0, "tail threshold must be positive");
  require(c.L >= 2.0, "L must be at least 2");
  require(c.beta >= 1.0, "beta must be at least 1");
  if (c.initial == InitialKind::single_mode) {
    require(c.mode_m >= 1 && c.mode_m <= c.N && c.mode_n >= 1 && c.mode_n <= c.N, "single mode outside the band");
  }
}

SineField initial_field(const ExperimentConfig& c) {
  switch (c.initial) {
    case InitialKind::omega0: {
      InitialDataSpec spec;
      spec.delta = c.delta;
      spec.delta_max = c.delta_max;
      spec.blend_order = c.blend_order;
      spec.N = c.N;
      spec.N_g = c.N_g;
      return build_omega0(spec);
    }
    case InitialKind::single_mode: {
      SineField f(c.N);
      f.at(c.mode_m, c.mode_n) = 1.0;
      return f;
    }
    case InitialKind::zero:
      break;
  }
  return SineField(c.N);
}

}  // namespace msqg
