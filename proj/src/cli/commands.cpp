#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "msqg/cli.hpp"
#include "msqg/initial_data.hpp"
#include "msqg/snapshot.hpp"
#include "msqg/trajectory.hpp"

namespace msqg {
namespace fs = std::filesystem;
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  require(static_cast<bool>(out), "cannot write " + path.string());
  out << text;
}

InitialDataSpec data_spec(const ExperimentConfig& c, double delta, int blend) {
  InitialDataSpec s;
  s.delta = delta;
  s.delta_max = std::max(c.delta_max, delta);
  s.blend_order = blend;
  s.N = c.N;
  s.N_g = c.N_g;
  return s;
}

std::unique_ptr<FieldSampler> sampler_for(const ExperimentConfig& c, double delta, int blend) {
  switch (c.initial) {
    case InitialKind::omega0: {
      const auto spec = data_spec(c, delta, blend);
      validate(spec);
      return std::make_unique<FunctionSampler>(omega0_sampler(spec));
    }
    case InitialKind::single_mode:
      return std::make_unique<SeriesSampler>(initial_field(c));
    case InitialKind::zero:
      break;
  }
  return std::make_unique<FunctionSampler>([](double, double) { return 0.0; });
}

double field_sup(const FieldSampler& w) {
  std::vector<double> g(257);
  for (int i = 0; i <= 256; ++i) g[i] = kPi * i / 256;
  std::vector<double> v(g.size() * g.size());
  w.sample_grid(g, g, v);
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

int other_blend(int b) { return b == 4 ? 2 : 4; }

BoundReport near_report(const ExperimentConfig& c, int blend, PvShape shape) {
  const auto w = sampler_for(c, c.delta, blend);
  ExperimentConfig cc = c;
  cc.blend_order = blend;
  const double H = hessian_sup_norm(initial_field(cc), c.N_g);
  KernelParams p;
  p.pv_shape = shape;
  return verify_near_field(*w, c.alpha, sample_points(geometric_range(0.002, 0.05, 6), 8), {8.0, 16.0}, H, p);
}

BoundReport medium_report(const ExperimentConfig& c, int blend) {
  const auto w = sampler_for(c, c.delta, blend);
  return verify_medium_ratio(*w, c.alpha, sample_points(geometric_range(1e-3, 1.5e-2, 6), 8), {8.0, 16.0, 32.0, 64.0});
}

BoundReport background_report(const ExperimentConfig& c, int blend, bool with_monotonicity) {
  const std::vector<double> deltas{0.1, 0.2, 0.4};
  std::vector<std::unique_ptr<FieldSampler>> ws;
  std::vector<BackgroundCase> cases;
  const double L = c.L;
  for (double d : deltas) {
    ws.push_back(sampler_for(c, d, blend));
    const double s = d / (2.0 * L);
    std::vector<Point> xs{{s, s}};
    for (double theta : {kPi / 8, 3 * kPi / 8}) xs.push_back({std::sqrt(2.0) * s * std::cos(theta), std::sqrt(2.0) * s * std::sin(theta)});
    cases.push_back({d, ws.back().get(), xs});
  }
  BoundReport r = verify_background(cases, c.alpha, L);
  if (with_monotonicity && c.initial == InitialKind::omega0) {
    // omega = 1 on the whole open quadrant dominates every member of the family.
    const FunctionSampler one([](double, double) { return 1.0; });
    KernelParams p;
    p.alpha = c.alpha;
    bool ok = true;
    for (const auto& s : r.samples) {
      const auto u = velocity_quadrature(one, s.x, p, {RegionKind::medium, L});
      const double v = (s.component == 1 ? -u.u1 : u.u2) / s.x.component(s.component);
      ok = ok && v >= s.measured;
    }
    r.metrics["monotone_against_one"] = ok ? 1.0 : 0.0;
    if (!ok) {
      r.notes.push_back("omega = 1 gave a smaller medium velocity than the data at some sample");
      r.pass = false;
    }
  }
  return r;
}

}  // namespace

std::vector<BoundReport> verify_suite(const ExperimentConfig& c, const std::string& which) {
  static const std::vector<std::string> kinds{"kernels", "near", "medium", "far", "background", "all"};
  require(std::find(kinds.begin(), kinds.end(), which) != kinds.end(),
          "unknown verification '" + which + "' (kernels, near, medium, far, background, all)");
  require_alpha_open(c.alpha);
  const bool all = which == "all";
  std::vector<BoundReport> out;
  if (all || which == "kernels") out.push_back(verify_kernel_asymptotics(c.alpha));
  if (all || which == "near") {
    BoundReport r = near_report(c, c.blend_order, PvShape::disk);
    if (c.alpha >= 0.5) {
      const BoundReport sq = near_report(c, c.blend_order, PvShape::square);
      double diff = 0.0;
      for (std::size_t i = 0; i < r.samples.size() && i < sq.samples.size(); ++i) {
        if (r.samples[i].measured > 0.0) {
          diff = std::max(diff, std::abs(sq.samples[i].measured - r.samples[i].measured) / r.samples[i].measured);
        }
      }
      r.metrics["pv_square_max_relative_difference"] = diff;
      r.metrics["pv_square_exponent"] = sq.fitted_exponent;
    }
    if (c.initial == InitialKind::omega0) {
      r.metrics["other_blend_exponent"] = near_report(c, other_blend(c.blend_order), PvShape::disk).fitted_exponent;
    }
    out.push_back(std::move(r));
  }
  if (all || which == "medium") {
    BoundReport r = medium_report(c, c.blend_order);
    if (c.initial == InitialKind::omega0) {
      const BoundReport o = medium_report(c, other_blend(c.blend_order));
      r.metrics["other_blend_exponent"] = o.fitted_exponent;
      r.metrics["other_blend_B"] = o.metrics.count("B") ? o.metrics.at("B") : 0.0;
    }
    out.push_back(std::move(r));
  }
  if (all || which == "far") {
    const auto w = sampler_for(c, c.delta, c.blend_order);
    std::vector<Point> xs;
    for (double s : geometric_range(1e-3, 1e-2, 6)) xs.push_back({s, s});
    out.push_back(verify_far_field(*w, c.alpha, xs, field_sup(*w)));
  }
  if (all || which == "background") {
    BoundReport r = background_report(c, c.blend_order, true);
    if (c.initial == InitialKind::omega0) {
      r.metrics["other_blend_exponent"] = background_report(c, other_blend(c.blend_order), false).fitted_exponent;
    }
    out.push_back(std::move(r));
  }
  return out;
}

int cmd_make_data(const RunOptions& o, std::ostream& log) {
  const auto t0 = Clock::now();
  const ExperimentConfig& c = o.config;
  const InitialDataSpec spec = data_spec(c, c.delta, c.blend_order);
  // The configured delta_max is a hard limit here.
  InitialDataSpec strict = spec;
  strict.delta_max = c.delta_max;
  validate(strict);
  const SineField w = build_omega0(strict);
  const InitialDataChecks k = check_initial_data(strict, w);
  fs::create_directories(c.out_dir);
  const fs::path snap = c.out_dir / "omega0.bin";
  write_snapshot(snap, {w, c.N_g, c.alpha, 0.0,
                        "{\"delta\":" + std::to_string(c.delta) + ",\"blend_order\":" + std::to_string(c.blend_order) + "}"});

  const bool range_ok = k.exact_min >= 0.0 && k.exact_max <= 1.0 && k.range_ok(1e-3);
  const bool degeneracy_ok = k.degeneracy_relative() <= 1e-8;
  const bool defect_ok = k.defect_fraction <= k.defect_bound;
  nlohmann::json j;
  j["delta"] = c.delta;
  j["N"] = c.N;
  j["N_g"] = c.N_g;
  j["blend_order"] = c.blend_order;
  j["series_min"] = k.min_value;
  j["series_max"] = k.max_value;
  j["exact_min"] = k.exact_min;
  j["exact_max"] = k.exact_max;
  j["defect_fraction"] = k.defect_fraction;
  j["defect_bound"] = k.defect_bound;
  j["degeneracy"] = k.degeneracy;
  j["max_gradient"] = k.max_gradient;
  j["degeneracy_relative"] = k.degeneracy_relative();
  j["cells_across_strip"] = k.cells_across_strip;
  j["range_ok"] = range_ok;
  j["degeneracy_ok"] = degeneracy_ok;
  j["defect_ok"] = defect_ok;
  j["warnings"] = k.warnings;
  const fs::path checks = c.out_dir / "initial_checks.json";
  write_text(checks, j.dump(2) + "\n");

  log << "omega0: delta = " << c.delta << ", N = " << c.N << ", N_g = " << c.N_g << ", blend C" << c.blend_order << "\n";
  log << "  range      series [" << k.min_value << ", " << k.max_value << "], exact [" << k.exact_min << ", "
      << k.exact_max << "]  " << (range_ok ? "ok" : "FAIL") << "\n";
  log << "  defect     " << k.defect_fraction << " <= " << k.defect_bound << "  " << (defect_ok ? "ok" : "FAIL") << "\n";
  log << "  degeneracy " << k.degeneracy_relative() << " x max|grad|  " << (degeneracy_ok ? "ok" : "FAIL") << "\n";
  for (const auto& w8 : k.warnings) log << "  warning: " << w8 << "\n";
  write_manifest(c.out_dir, "make-data", c, seconds_since(t0), {snap, checks});
  return range_ok && degeneracy_ok && defect_ok ? exit_ok : exit_fail;
}

int cmd_simulate(const RunOptions& o, std::ostream& log) {
  const auto t0 = Clock::now();
  const ExperimentConfig& c = o.config;
  validate(c);
  fs::create_directories(c.out_dir);
  RunResult r = run(c);

  nlohmann::json s;
  s["halt_reason"] = halt_name(r.reason);
  s["detail"] = r.detail;
  s["final_time"] = r.final_state.time;
  s["steps"] = r.final_state.step_count;
  s["last_resolved_time"] = r.last_resolved_time;
  s["spectral_filter"] = c.spectral_filter;
  s["warnings"] = r.warnings;
  std::vector<double> times, hess;
  double l2_drift = 0.0, max_growth = 0.0, degeneracy = 0.0;
  const auto& first = r.records.front();
  for (const auto& d : r.records) {
    if (d.time > r.last_resolved_time + 1e-12) continue;
    times.push_back(d.time);
    hess.push_back(d.hessian_sup);
    if (first.l2_norm > 0.0) l2_drift = std::max(l2_drift, std::abs(d.l2_norm - first.l2_norm) / first.l2_norm);
    if (first.omega_max > 0.0) max_growth = std::max(max_growth, d.omega_max / first.omega_max - 1.0);
    if (d.gradient_sup > 0.0) degeneracy = std::max(degeneracy, d.degeneracy / d.gradient_sup);
  }
  s["l2_relative_drift"] = l2_drift;
  s["max_principle_excess"] = max_growth;
  s["degeneracy_relative_max"] = degeneracy;
  if (hess.size() >= 2 && hess.front() > 0.0) s["hessian_growth_ratio"] = hess.back() / hess.front();
  try {
    const GrowthRecord g = fit_gamma(times, hess);
    s["gamma"] = g.fitted_gamma;
    s["gamma_r2"] = g.fit_r2;
    s["fit_window"] = {g.fit_start, g.fit_end};
  } catch (const InvalidArgument& e) {
    s["gamma"] = nullptr;
    s["gamma_note"] = e.what();
  }
  std::vector<fs::path> files = r.files;
  const fs::path summary = c.out_dir / "summary.json";
  write_text(summary, s.dump(2) + "\n");
  files.push_back(summary);
  nlohmann::json meta;
  meta["config"] = nlohmann::json::parse(config_json(c));
  meta["provenance"] = std::string("msqg-") + kToolVersion + "+cfg." + sha256_hex(config_json(c)).substr(0, 12);
  meta["spectral_filter"] = c.spectral_filter;
  const fs::path metadata = c.out_dir / "metadata.json";
  write_text(metadata, meta.dump(2) + "\n");
  files.push_back(metadata);
  write_manifest(c.out_dir, "simulate", c, seconds_since(t0), files);

  log << "simulate: " << halt_name(r.reason) << " at t = " << r.final_state.time << " after "
      << r.final_state.step_count << " steps";
  if (!r.detail.empty()) log << " (" << r.detail << ")";
  log << "\n";
  for (const auto& w : r.warnings) log << "  warning: " << w << "\n";
  if (s.contains("gamma") && !s["gamma"].is_null()) {
    log << "  gamma = " << s["gamma"].get<double>() << ", R^2 = " << s["gamma_r2"].get<double>() << "\n";
  }
  return r.reason == HaltReason::horizon ? exit_ok : exit_fail;
}

int cmd_verify(const RunOptions& o, std::ostream& log) {
  const auto t0 = Clock::now();
  const ExperimentConfig& c = o.config;
  const auto reports = verify_suite(c, o.which);
  fs::create_directories(c.out_dir);
  const fs::path json = c.out_dir / "reports.json";
  const fs::path csv = c.out_dir / "reports.csv";
  write_text(json, reports_json(reports) + "\n");
  write_text(csv, reports_csv(reports));
  bool ok = true;
  for (const auto& r : reports) {
    ok = ok && r.pass;
    log << (r.pass ? "PASS " : "FAIL ") << estimate_name(r.id) << "  alpha = " << r.alpha
        << "  exponent = " << r.fitted_exponent << " (expected " << r.theoretical_exponent << ")  R^2 = "
        << r.regression_r2 << "  constant = " << r.fitted_constant << "\n";
    for (const auto& [k, v] : r.metrics) log << "    " << k << " = " << v << "\n";
    for (const auto& n : r.notes) log << "    note: " << n << "\n";
  }
  write_manifest(c.out_dir, "verify", c, seconds_since(t0), {json, csv});
  return ok ? exit_ok : exit_fail;
}

int cmd_trace(const RunOptions& o, std::ostream& log) {
  const auto t0 = Clock::now();
  const ExperimentConfig& c = o.config;
  const fs::path dir = o.snapshots.empty() ? c.out_dir / "snapshots" : o.snapshots;
  require(fs::is_directory(dir), "snapshot directory not found: " + dir.string());
  std::vector<fs::path> paths;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".bin") paths.push_back(e.path());
  }
  require(!paths.empty(), "no snapshot files in " + dir.string());
  std::vector<TimedField> snaps;
  double alpha = c.alpha;
  int intervals = c.N_g;
  for (const auto& p : paths) {
    Snapshot s = read_snapshot(p);
    alpha = s.alpha;
    intervals = s.intervals;
    snaps.push_back({s.time, std::move(s.field)});
  }
  std::sort(snaps.begin(), snaps.end(), [](const TimedField& a, const TimedField& b) { return a.time < b.time; });
  for (std::size_t i = 1; i < snaps.size(); ++i) {
    require(snaps[i].time > snaps[i - 1].time, "duplicate snapshot times in " + dir.string());
  }
  if (alpha != c.alpha) log << "  note: using alpha = " << alpha << " from the snapshot headers\n";

  std::vector<double> times;
  std::vector<SineField> fields;
  for (const auto& s : snaps) {
    times.push_back(s.time);
    fields.push_back(s.omega);
  }
  const SnapshotVelocity source(times, fields, alpha);
  double dt = o.trace_dt;
  if (dt <= 0.0) {
    dt = INFINITY;
    for (std::size_t i = 1; i < times.size(); ++i) dt = std::min(dt, times[i] - times[i - 1]);
    if (!std::isfinite(dt)) dt = c.dt;
  }
  const double grid_floor = 4.0 * kPi / intervals;
  const StartPoint start = select_start(c.T, c.delta, alpha, c.beta, grid_floor);
  const double t_end = times.back() - times.front();
  TrajectoryState path = trace(start.point, source, t_end, dt);

  std::vector<double> hess;
  for (const auto& f : fields) hess.push_back(hessian_sup_norm(f, intervals));
  const StoppingTime stop = stopping_time(path, times, hess, c.T, start.point.x1, c.growth_threshold);

  nlohmann::json s;
  s["start"] = {start.point.x1, start.point.x2};
  s["formula_x1"] = start.formula_x1;
  s["scaled_regime"] = start.scaled_regime;
  s["x2_below_floor"] = start.x2_below_floor;
  s["grid_floor"] = grid_floor;
  s["trace_dt"] = dt;
  s["T0"] = stop.T0;
  s["stop_reason"] = stop_reason_name(stop.reason);
  s["halted"] = path.halted;
  s["halt_detail"] = path.detail;

  // Vorticity along the path at snapshot times against its initial value.
  const double w0 = evaluate_offgrid(fields.front(), start.point);
  double transport = 0.0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    while (k < path.history.size() && path.history[k].time < times[i] - 1e-9) ++k;
    if (k == path.history.size() || std::abs(path.history[k].time - times[i]) > 1e-9) continue;
    path.history[k].omega = evaluate_offgrid(fields[i], path.history[k].position);
    transport = std::max(transport, std::abs(path.history[k].omega - w0));
  }
  s["omega_start"] = w0;
  s["transport_max_deviation"] = transport;

  if (alpha > 0.0) {
    const RatioMonitor m = medium_ratio_monitor(path, snaps, alpha, c.L, {}, true, o.ratio_samples);
    std::size_t h = 0;
    int dominated = 0;
    for (const auto& r : m.samples) {
      while (h < path.history.size() && path.history[h].time < r.time - 1e-9) ++h;
      if (h < path.history.size()) path.history[h].ratio = r.ratio;
      if (r.medium_dominates) ++dominated;
    }
    s["ratio_samples"] = m.samples.size();
    s["ratio_max_deviation"] = finite_or_null(m.samples.empty() ? NAN : m.max_deviation);
    s["medium_dominates_samples"] = dominated;
    s["ratio_skipped"] = m.skipped;
  }
  try {
    const GrowthRecord g = fit_gamma(times, hess);
    s["gamma"] = g.fitted_gamma;
    s["gamma_r2"] = g.fit_r2;
    s["fit_window"] = {g.fit_start, g.fit_end};
    write_growth_csv(c.out_dir / "growth.csv", g);
  } catch (const InvalidArgument& e) {
    s["gamma"] = nullptr;
    s["gamma_note"] = e.what();
    GrowthRecord g;
    g.times = times;
    g.hessian_sup = hess;
    write_growth_csv(c.out_dir / "growth.csv", g);
  }
  fs::create_directories(c.out_dir);
  const fs::path traj = c.out_dir / "trajectory.csv";
  write_trajectory_csv(traj, path);
  const fs::path summary = c.out_dir / "trace_summary.json";
  write_text(summary, s.dump(2) + "\n");
  write_manifest(c.out_dir, "trace", c, seconds_since(t0), {traj, c.out_dir / "growth.csv", summary});

  log << "trace: start (" << start.point.x1 << ", " << start.point.x2 << ")"
      << (start.scaled_regime ? " [scaled regime]" : "") << ", T0 = " << stop.T0 << " ("
      << stop_reason_name(stop.reason) << ")\n";
  if (path.halted) log << "  halted: " << path.detail << "\n";
  return path.halted ? exit_fail : exit_ok;
}

}  // namespace msqg
