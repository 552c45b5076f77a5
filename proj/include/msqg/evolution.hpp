#pragma once

// Pseudo-spectral time stepping of  d_t w + u . grad w = 0,
// u = grad-perp (-Lap)^{-1+a} w, on sine coefficients with classical RK4.

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "msqg/spectral.hpp"

namespace msqg {

enum class DtPolicy { fixed, cfl };
enum class InitialKind { omega0, single_mode, zero };

struct ExperimentConfig {
  double alpha = 0.5;
  double delta = 0.25;
  double delta_max = kPi / 8;
  int blend_order = 4;
  double L = 32.0;
  double beta = 5.0;
  int N = 256;
  int N_g = 512;
  DtPolicy dt_policy = DtPolicy::cfl;
  double dt = 1e-3;          // used by the fixed policy
  double cfl_safety = 0.25;
  double dt_min = 1e-7;
  double dt_max = 0.05;
  double T = 10.0;
  double diag_interval = 0.01;     // time between diagnostics records; 0 = every step
  double snapshot_interval = 0.0;  // 0 = no snapshot files
  std::filesystem::path out_dir;   // empty = no files
  unsigned seed = 1;
  InitialKind initial = InitialKind::omega0;
  int mode_m = 1;  // single-mode initial data sin(m x1) sin(n x2)
  int mode_n = 1;
  bool spectral_filter = false;
  // Resolution is declared exhausted once the relative L2 content of the
  // outer band max(m, n) > 3N/4 exceeds this value.
  double tail_threshold = 1e-3;
  double growth_threshold = 1e3;  // trajectory stopping: hessian / initial
};

void validate(const ExperimentConfig& c);
SineField initial_field(const ExperimentConfig& c);

struct SimState {
  SineField omega;
  double time = 0.0;
  long step_count = 0;
  ExperimentConfig config;
};

/// -(u . grad w) on the interior grid, transformed back and truncated to N.
/// intervals = 0 selects 2N.
SineField nonlinear_term(const SineField& omega, double alpha, int intervals = 0);

/// Reusable workspace for repeated right-hand-side evaluations.
class Stepper {
 public:
  Stepper(int order, int intervals, double alpha);
  ~Stepper();
  Stepper(const Stepper&) = delete;
  Stepper& operator=(const Stepper&) = delete;

  void rhs(const SineField& w, SineField& out);
  /// max(|u1|, |u2|) over the interior grid from the latest rhs call.
  double last_max_velocity() const { return umax_; }
  void step_rk4(SineField& w, double dt);
  /// RK4 step whose size is chosen from the velocity at the start of the
  /// step: dt = choose(max|u|). Returns the dt used.
  double step_rk4(SineField& w, const std::function<double(double)>& choose);
  /// Filter multiplying mode (m, n) by exp(-36 ((max(m,n))/N)^36); off by default.
  void set_filter(bool on) { filter_ = on; }

 private:
  struct Buffers;
  int order_;
  int intervals_;
  double alpha_;
  double umax_ = 0.0;
  bool filter_ = false;
  std::unique_ptr<Buffers> buf_;
};

SimState step_rk4(const SimState& state, double dt);

/// safety * (pi / N_g) / max|u|, clamped to [dt_min, dt_max]; dt_max for u = 0.
double cfl_dt(const VelocityField& u, int intervals, double safety, double dt_min, double dt_max);
double cfl_dt_from_speed(double umax, int intervals, double safety, double dt_min, double dt_max);

struct DiagnosticsRecord {
  double time = 0.0;
  double hessian_sup = 0.0;
  double omega_max = 0.0;  // max |w| over the grid
  double l2_norm = 0.0;
  double degeneracy = 0.0;
  double dt = 0.0;
  double omega_min = 0.0;  // signed minimum over the grid
  double gradient_sup = 0.0;
  double spectral_tail = 0.0;
  long step = 0;
};

DiagnosticsRecord diagnose(const SineField& w, double time, double dt, long step, int intervals);
double spectral_tail(const SineField& w);

std::string diagnostics_csv_header();
std::string diagnostics_csv_row(const DiagnosticsRecord& r);

enum class HaltReason { horizon, resolution_exhausted, non_finite, stopped };
std::string halt_name(HaltReason r);

struct RunResult {
  std::vector<DiagnosticsRecord> records;
  HaltReason reason = HaltReason::horizon;
  std::string detail;
  SimState final_state;
  double last_resolved_time = 0.0;
  std::vector<std::filesystem::path> files;  // snapshots and CSV written
  std::vector<std::string> warnings;
};

/// Called after every accepted step (and once at t = 0); return false to stop.
using StepObserver = std::function<bool(const SimState&, double dt)>;

RunResult run(const ExperimentConfig& config, const StepObserver& observer = {});

}  // namespace msqg
