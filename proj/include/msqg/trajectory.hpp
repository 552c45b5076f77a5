#pragma once

// Characteristics of the flow map, the start point and stopping time of the
// degenerate-data construction, and exponential growth fits.

#include <filesystem>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "msqg/biot_savart.hpp"
#include "msqg/spectral.hpp"

namespace msqg {

/// u(x, t) for characteristic tracing.
class VelocitySource {
 public:
  virtual ~VelocitySource() = default;
  virtual Point velocity(Point x, double t) const = 0;
};

class ZeroVelocity final : public VelocitySource {
 public:
  Point velocity(Point, double) const override { return {0.0, 0.0}; }
};

/// Time-independent velocity of a fixed vorticity field.
class SteadyVelocity final : public VelocitySource {
 public:
  SteadyVelocity(const SineField& omega, double alpha);
  Point velocity(Point x, double t) const override;

 private:
  VelocityCoefficients u_;
};

/// Velocity of stored vorticity snapshots, linear in time between them and
/// constant outside the covered interval.
class SnapshotVelocity final : public VelocitySource {
 public:
  SnapshotVelocity(std::vector<double> times, const std::vector<SineField>& omegas, double alpha);
  Point velocity(Point x, double t) const override;
  double first_time() const { return times_.front(); }
  double last_time() const { return times_.back(); }

 private:
  std::vector<double> times_;
  std::vector<VelocityCoefficients> u_;
};

struct TrajectorySample {
  double time = 0.0;
  Point position;
  Point velocity;
  double ratio = std::numeric_limits<double>::quiet_NaN();  // medium ratio r, NaN if not evaluated
  double omega = std::numeric_limits<double>::quiet_NaN();  // vorticity at the position, if known
};

struct TrajectoryState {
  Point position;
  Point start;
  double time = 0.0;
  std::vector<TrajectorySample> history;
  bool halted = false;
  std::string detail;
};

/// Positions may leave [0, pi]^2 by at most this much before tracing halts.
inline constexpr double kQuadrantTolerance = 1e-8;

/// RK4 in time with step dt from 0 to t_end (the last step is shortened).
TrajectoryState trace(Point start, const VelocitySource& source, double t_end, double dt);

/// RK4 tracer driven by a running simulation. Fed the vorticity after every
/// step with a constant step size; advances its characteristics by one RK4
/// step of twice the simulation step each time two new states have arrived,
/// so the stage velocities are exact simulation states and no time
/// interpolation is needed.
class StreamingTracer {
 public:
  StreamingTracer(std::vector<Point> starts, double alpha);
  /// States must arrive at equally spaced times, starting with t = 0.
  void feed(const SineField& omega, double time);
  const std::vector<TrajectoryState>& trajectories() const { return paths_; }
  /// Vorticity at each start point in the first state fed.
  const std::vector<double>& initial_values() const { return initial_; }

 private:
  void record(std::size_t k, double time, const VelocityCoefficients& u, const SineField& omega);

  double alpha_;
  std::vector<TrajectoryState> paths_;
  std::vector<double> initial_;
  std::vector<VelocityCoefficients> held_;  // states at t0 and t0 + h
  std::vector<double> held_times_;
};

struct StartPoint {
  Point point;
  double formula_x1 = 0.0;     // exp(-T delta^(-alpha/2)) before flooring
  bool scaled_regime = false;  // the floor replaced the formula value
  bool x2_below_floor = false;
};

/// x1 = max(exp(-T delta^(-alpha/2)), grid_floor), x2 = x1^beta.
StartPoint select_start(double T, double delta, double alpha, double beta, double grid_floor);

enum class StopReason { horizon, x2_reaches_x10, hessian_threshold };
std::string stop_reason_name(StopReason r);

struct StoppingTime {
  double T0 = 0.0;
  StopReason reason = StopReason::horizon;
};

/// First of: the horizon T, x2(t) = x1_0 (linear interpolation between
/// samples), hessian >= growth_threshold * hessian(0) (first sample at or
/// above the threshold).
StoppingTime stopping_time(const TrajectoryState& path, const std::vector<double>& hessian_times,
                           const std::vector<double>& hessian, double T, double x1_0, double growth_threshold);

struct RatioSample {
  double time = 0.0;
  Point position;
  double ratio = 0.0;
  bool medium_dominates = false;  // |u_j^near| + |u_j^far| <= (-1)^j u_j^med / L for j = 1, 2
};

struct RatioMonitor {
  std::vector<RatioSample> samples;
  std::vector<std::string> skipped;
  double max_deviation = 0.0;  // max |r - 1|
};

struct TimedField {
  double time = 0.0;
  SineField omega;
};

/// r(t) = -u1^med x2 / (x1 u2^med) at trajectory samples whose time matches a
/// snapshot. Samples with L|x| > 1 or off the snapshot times are skipped.
/// At most max_samples snapshots (evenly spread, 0 = all) are evaluated; the
/// dominance check costs a near and a far quadrature per sample.
RatioMonitor medium_ratio_monitor(const TrajectoryState& path, const std::vector<TimedField>& snapshots, double alpha,
                                  double L, const KernelParams& params = {}, bool check_dominance = true,
                                  int max_samples = 0);

struct GrowthRecord {
  std::vector<double> times;
  std::vector<double> hessian_sup;
  double fitted_gamma = 0.0;
  double fit_start = 0.0;
  double fit_end = 0.0;
  double fit_r2 = 0.0;
  int fit_samples = 0;
};

/// Least-squares slope of log(hessian) against time over the window that
/// drops the first `transient` fraction of the covered time.
GrowthRecord fit_gamma(std::vector<double> times, std::vector<double> hessian, double transient = 0.1);

void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryState& t);
void write_growth_csv(const std::filesystem::path& path, const GrowthRecord& g);

}  // namespace msqg
