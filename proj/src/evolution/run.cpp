#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "msqg/evolution.hpp"
#include "msqg/initial_data.hpp"
#include "msqg/simd.hpp"
#include "msqg/snapshot.hpp"
#include "msqg/transforms.hpp"

namespace msqg {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// max |w| over interior grid points (the boundary values are zero).
double grid_max_abs(const SineField& w, int intervals, std::vector<double>& scratch) {
  auto& tr = SineTransforms::for_grid(intervals);
  scratch.resize(static_cast<std::size_t>(tr.interior()) * tr.interior());
  tr.synthesize_interior(w.coeffs(), w.order(), Basis::sine, Basis::sine, scratch, true);
  return simd::active().max_abs(scratch);
}

}  // namespace

double spectral_tail(const SineField& w) {
  const int n = w.order();
  const int cut = (3 * n) / 4;
  double tail = 0.0, total = 0.0;
  for (int m = 1; m <= n; ++m) {
    for (int k = 1; k <= n; ++k) {
      const double a2 = w.at(m, k) * w.at(m, k);
      total += a2;
      if (std::max(m, k) > cut) tail += a2;
    }
  }
  return total > 0.0 ? std::sqrt(tail / total) : 0.0;
}

DiagnosticsRecord diagnose(const SineField& w, double time, double dt, long step, int intervals) {
  DiagnosticsRecord r;
  r.time = time;
  r.dt = dt;
  r.step = step;
  const GridField g = inverse_transform(w, intervals);
  const auto v = g.values();
  r.omega_max = simd::active().max_abs(v);
  r.omega_min = *std::min_element(v.begin(), v.end());
  r.hessian_sup = hessian_sup_norm(w, intervals);
  r.gradient_sup = gradient_sup_norm(w, intervals);
  r.l2_norm = std::sqrt(spectral_l2_squared(w));
  r.degeneracy = check_degeneracy(w, intervals);
  r.spectral_tail = spectral_tail(w);
  return r;
}

std::string diagnostics_csv_header() {
  return "time,hessian_sup,omega_max,l2_norm,degeneracy,dt,omega_min,gradient_sup,spectral_tail,step";
}

std::string diagnostics_csv_row(const DiagnosticsRecord& r) {
  return fmt(r.time) + "," + fmt(r.hessian_sup) + "," + fmt(r.omega_max) + "," + fmt(r.l2_norm) + "," +
         fmt(r.degeneracy) + "," + fmt(r.dt) + "," + fmt(r.omega_min) + "," + fmt(r.gradient_sup) + "," +
         fmt(r.spectral_tail) + "," + std::to_string(r.step);
}

std::string halt_name(HaltReason r) {
  switch (r) {
    case HaltReason::horizon: return "horizon";
    case HaltReason::resolution_exhausted: return "resolution exhausted";
    case HaltReason::non_finite: return "non-finite values";
    case HaltReason::stopped: return "stopped by observer";
  }
  return "?";
}

RunResult run(const ExperimentConfig& config, const StepObserver& observer) {
  validate(config);
  RunResult result;
  SimState state{initial_field(config), 0.0, 0, config};
  Stepper stepper(config.N, config.N_g, config.alpha);
  stepper.set_filter(config.spectral_filter);

  const bool files = !config.out_dir.empty();
  if (files) std::filesystem::create_directories(config.out_dir / "snapshots");
  auto write_snap = [&](const SimState& s) {
    char name[48];
    std::snprintf(name, sizeof name, "omega_%08ld.bin", s.step_count);
    const auto path = config.out_dir / "snapshots" / name;
    write_snapshot(path, {s.omega, config.N_g, config.alpha, s.time,
                          "{\"step\":" + std::to_string(s.step_count) +
                              ",\"spectral_filter\":" + (config.spectral_filter ? "true" : "false") + "}"});
    result.files.push_back(path);
  };

  const double eps = 1e-12 * std::max(1.0, config.T);
  double next_diag = 0.0;
  double next_snap = 0.0;
  double last_dt = 0.0;
  auto maybe_output = [&](bool force) {
    if (force || state.time >= next_diag - eps) {
      result.records.push_back(diagnose(state.omega, state.time, last_dt, state.step_count, config.N_g));
      while (next_diag <= state.time + eps) next_diag += config.diag_interval > 0.0 ? config.diag_interval : 1e300;
      if (config.diag_interval == 0.0) next_diag = state.time;
    }
    if (files && config.snapshot_interval > 0.0 && state.time >= next_snap - eps) {
      write_snap(state);
      while (next_snap <= state.time + eps) next_snap += config.snapshot_interval;
    }
  };

  std::vector<double> scratch;
  double wmax = grid_max_abs(state.omega, config.N_g, scratch);
  maybe_output(true);
  bool keep_going = !observer || observer(state, 0.0);
  if (!keep_going) result.reason = HaltReason::stopped;
  const double tail_limit = config.tail_threshold;
  bool cfl_warned = false;
  const double h = kPi / config.N_g;

  while (keep_going && state.time < config.T - eps) {
    const SineField previous = state.omega;
    const double remaining = config.T - state.time;
    double dt = 0.0;
    try {
      dt = stepper.step_rk4(state.omega, [&](double umax) {
        double step = config.dt_policy == DtPolicy::fixed
                          ? config.dt
                          : cfl_dt_from_speed(umax, config.N_g, config.cfl_safety, config.dt_min, config.dt_max);
        if (config.dt_policy == DtPolicy::fixed && !cfl_warned && umax * config.dt > 0.5 * h) {
          result.warnings.push_back("fixed dt exceeds the CFL limit 0.5 h/|u| at t = " + fmt(state.time));
          cfl_warned = true;
        }
        return std::min(step, remaining);
      });
    } catch (const NumericalError& e) {
      state.omega = previous;
      result.reason = HaltReason::non_finite;
      result.detail = e.what();
      break;
    }
    state.time += dt;
    ++state.step_count;
    last_dt = dt;

    const double tail = spectral_tail(state.omega);
    const double wmax_new = grid_max_abs(state.omega, config.N_g, scratch);
    if (wmax_new > 1.1 * wmax || tail > tail_limit) {
      result.reason = HaltReason::resolution_exhausted;
      result.detail = wmax_new > 1.1 * wmax
                          ? "max |omega| grew by more than 10% in one step at t = " + fmt(state.time)
                          : "spectral tail " + fmt(tail) + " exceeded " + fmt(tail_limit) +
                                " at t = " + fmt(state.time);
      maybe_output(true);
      break;
    }
    wmax = wmax_new;
    result.last_resolved_time = state.time;
    const bool done = state.time >= config.T - eps;
    maybe_output(done);
    if (observer && !observer(state, dt)) {
      result.reason = HaltReason::stopped;
      break;
    }
  }
  if (result.reason == HaltReason::non_finite && files) write_snap(state);

  if (files) {
    const auto path = config.out_dir / "diagnostics.csv";
    std::ofstream out(path);
    out << diagnostics_csv_header() << '\n';
    for (const auto& r : result.records) out << diagnostics_csv_row(r) << '\n';
    result.files.push_back(path);
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace msqg
