#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "msqg/trajectory.hpp"

namespace msqg {
namespace {

Point eval(const VelocityCoefficients& u, Point x) { return {evaluate_offgrid(u.u1, x), evaluate_offgrid(u.u2, x)}; }

bool inside(Point x) {
  return x.x1 >= -kQuadrantTolerance && x.x2 >= -kQuadrantTolerance && x.x1 <= kPi + kQuadrantTolerance &&
         x.x2 <= kPi + kQuadrantTolerance;
}

std::string describe(Point x) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.17g, %.17g)", x.x1, x.x2);
  return buf;
}

}  // namespace

SteadyVelocity::SteadyVelocity(const SineField& omega, double alpha) : u_(velocity_coefficients(omega, alpha)) {}

Point SteadyVelocity::velocity(Point x, double) const { return eval(u_, x); }

SnapshotVelocity::SnapshotVelocity(std::vector<double> times, const std::vector<SineField>& omegas, double alpha)
    : times_(std::move(times)) {
  require(!times_.empty() && times_.size() == omegas.size(), "need one time per snapshot");
  require(std::is_sorted(times_.begin(), times_.end()) &&
              std::adjacent_find(times_.begin(), times_.end()) == times_.end(),
          "snapshot times must be strictly increasing");
  u_.reserve(omegas.size());
  for (const auto& w : omegas) u_.push_back(velocity_coefficients(w, alpha));
}

Point SnapshotVelocity::velocity(Point x, double t) const {
  if (t <= times_.front()) return eval(u_.front(), x);
  if (t >= times_.back()) return eval(u_.back(), x);
  const auto hi = static_cast<std::size_t>(std::upper_bound(times_.begin(), times_.end(), t) - times_.begin());
  const std::size_t lo = hi - 1;
  const double s = (t - times_[lo]) / (times_[hi] - times_[lo]);
  // Exact at the snapshot times themselves.
  if (s == 0.0) return eval(u_[lo], x);
  return (1.0 - s) * eval(u_[lo], x) + s * eval(u_[hi], x);
}

TrajectoryState trace(Point start, const VelocitySource& source, double t_end, double dt) {
  require(dt > 0.0 && std::isfinite(dt), "trace step must be positive");
  require(t_end >= 0.0, "trace end time must be nonnegative");
  require(start.x1 > 0.0 && start.x2 > 0.0 && start.x1 < kPi && start.x2 < kPi,
          "start must lie in the open quadrant (0, pi)^2");
  TrajectoryState s;
  s.start = start;
  s.position = start;
  s.history.push_back({0.0, start, source.velocity(start, 0.0)});
  const long steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
  for (long k = 0; k < steps; ++k) {
    const double t = s.time;
    const double h = std::min(dt, t_end - t);
    const Point x = s.position;
    const Point k1 = s.history.back().velocity;
    const Point k2 = source.velocity(x + (0.5 * h) * k1, t + 0.5 * h);
    const Point k3 = source.velocity(x + (0.5 * h) * k2, t + 0.5 * h);
    const Point k4 = source.velocity(x + h * k3, t + h);
    s.position = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    s.time = k + 1 == steps ? t_end : t + h;
    if (!inside(s.position)) {
      s.halted = true;
      s.detail = "trajectory left [0, pi]^2 at t = " + std::to_string(s.time) + ", position " + describe(s.position);
      s.position = x;
      s.time = t;
      break;
    }
    s.history.push_back({s.time, s.position, source.velocity(s.position, s.time)});
  }
  return s;
}

StreamingTracer::StreamingTracer(std::vector<Point> starts, double alpha) : alpha_(alpha) {
  require_alpha_half_open(alpha);
  for (const auto& p : starts) {
    require(p.x1 > 0.0 && p.x2 > 0.0 && p.x1 < kPi && p.x2 < kPi, "start must lie in the open quadrant (0, pi)^2");
    TrajectoryState s;
    s.start = p;
    s.position = p;
    paths_.push_back(std::move(s));
  }
}

void StreamingTracer::record(std::size_t k, double time, const VelocityCoefficients& u, const SineField& omega) {
  auto& s = paths_[k];
  s.time = time;
  s.history.push_back({time, s.position, eval(u, s.position), std::numeric_limits<double>::quiet_NaN(),
                       evaluate_offgrid(omega, s.position)});
}

void StreamingTracer::feed(const SineField& omega, double time) {
  VelocityCoefficients u = velocity_coefficients(omega, alpha_);
  if (held_.empty()) {
    require(time == 0.0, "the streaming tracer starts at t = 0");
    for (std::size_t k = 0; k < paths_.size(); ++k) {
      record(k, time, u, omega);
      initial_.push_back(paths_[k].history.back().omega);
    }
    held_.push_back(std::move(u));
    held_times_.push_back(time);
    return;
  }
  if (held_.size() == 1) {
    held_.push_back(std::move(u));
    held_times_.push_back(time);
    return;
  }
  const double t0 = held_times_[0];
  const double h = time - t0;
  const double mid = held_times_[1] - t0;
  require(std::abs(mid - 0.5 * h) <= 1e-9 * std::max(1.0, h), "streaming tracer needs equally spaced states");
  for (std::size_t k = 0; k < paths_.size(); ++k) {
    auto& s = paths_[k];
    if (s.halted) continue;
    const Point x = s.position;
    const Point k1 = s.history.back().velocity;
    const Point k2 = eval(held_[1], x + (0.5 * h) * k1);
    const Point k3 = eval(held_[1], x + (0.5 * h) * k2);
    const Point k4 = eval(u, x + h * k3);
    const Point next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!inside(next)) {
      s.halted = true;
      s.detail = "trajectory left [0, pi]^2 at t = " + std::to_string(time) + ", position " + describe(next);
      continue;
    }
    s.position = next;
    record(k, time, u, omega);
  }
  held_.clear();
  held_times_.clear();
  held_.push_back(std::move(u));
  held_times_.push_back(time);
}

StartPoint select_start(double T, double delta, double alpha, double beta, double grid_floor) {
  require(T >= 0.0 && delta > 0.0 && beta >= 1.0 && grid_floor >= 0.0, "invalid start-point parameters");
  require_alpha_half_open(alpha);
  StartPoint s;
  s.formula_x1 = std::exp(-T * std::pow(delta, -0.5 * alpha));
  double x1 = s.formula_x1;
  if (x1 < grid_floor) {
    x1 = grid_floor;
    s.scaled_regime = true;
  }
  const double x2 = std::pow(x1, beta);
  s.x2_below_floor = x2 < grid_floor;
  s.point = {x1, x2};
  return s;
}

}  // namespace msqg
