#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "generators.hpp"
#include "msqg/trajectory.hpp"

using namespace msqg;

namespace {

SineField mode(int order, int m, int n) {
  SineField f(order);
  f.at(m, n) = 1.0;
  return f;
}

}  // namespace

TEST_CASE("start point") {
  // exp(-T delta^(-alpha/2)) with T = 1, delta = 1/4, alpha = 1/2 is exp(-sqrt 2).
  const StartPoint s = select_start(1.0, 0.25, 0.5, 5.0, 0.0);
  CHECK(s.point.x1 == doctest::Approx(0.2431).epsilon(1e-4));
  CHECK(s.point.x1 == doctest::Approx(std::exp(-std::sqrt(2.0))));
  CHECK(s.point.x2 == doctest::Approx(std::pow(s.point.x1, 5.0)));
  CHECK_FALSE(s.scaled_regime);

  const StartPoint f = select_start(10.0, 0.25, 0.5, 5.0, 4.0 * kPi / 512);
  CHECK(f.scaled_regime);
  CHECK(f.point.x1 == doctest::Approx(4.0 * kPi / 512));
  CHECK(f.formula_x1 < f.point.x1);
  CHECK(f.x2_below_floor);
  CHECK_THROWS_AS(select_start(1.0, 0.0, 0.5, 5.0, 0.0), InvalidArgument);
}

TEST_CASE("zero velocity leaves the point fixed") {
  const ZeroVelocity z;
  const TrajectoryState t = trace({0.3, 0.7}, z, 1.0, 0.1);
  CHECK_FALSE(t.halted);
  CHECK(t.time == doctest::Approx(1.0));
  CHECK(t.history.size() == 11);
  for (const auto& s : t.history) CHECK(s.position == Point{0.3, 0.7});
}

TEST_CASE("steady single mode conserves the stream function along paths") {
  // For a single mode the stream function is proportional to omega, so
  // omega is constant on characteristics of the steady flow.
  gen::Source src(61);
  const SineField w = mode(4, 1, 2);
  for (double alpha : {0.0, 0.5}) {
    const SteadyVelocity u(w, alpha);
    for (int k = 0; k < 5; ++k) {
      const Point x0 = src.quadrant_point(0.2);
      const TrajectoryState t = trace(x0, u, 2.0, 0.01);
      CHECK_FALSE(t.halted);
      CHECK(evaluate_offgrid(w, t.position) == doctest::Approx(evaluate_offgrid(w, x0)).epsilon(1e-8));
    }
  }
}

TEST_CASE("streaming tracer agrees with the offline tracer on a steady flow") {
  const SineField w = mode(4, 1, 1);
  const std::vector<Point> starts{{0.5, 0.9}, {2.0, 1.2}};
  StreamingTracer st(starts, 0.5);
  const double h = 0.01;
  for (int i = 0; i <= 100; ++i) st.feed(w, i * h);
  const SteadyVelocity u(w, 0.5);
  for (std::size_t k = 0; k < starts.size(); ++k) {
    const TrajectoryState ref = trace(starts[k], u, 1.0, 2 * h);
    const TrajectoryState& got = st.trajectories()[k];
    CHECK(got.time == doctest::Approx(1.0));
    CHECK(got.position.x1 == doctest::Approx(ref.position.x1).epsilon(1e-12));
    CHECK(got.position.x2 == doctest::Approx(ref.position.x2).epsilon(1e-12));
    CHECK(st.initial_values()[k] == doctest::Approx(evaluate_offgrid(w, starts[k])));
  }
  StreamingTracer bad(starts, 0.5);
  CHECK_THROWS_AS(bad.feed(w, 0.5), InvalidArgument);
}

TEST_CASE("snapshot velocity interpolates linearly in time") {
  const SineField a = mode(3, 1, 1);
  SineField b = a;
  b.at(1, 1) = 3.0;
  const SnapshotVelocity s({0.0, 1.0}, {a, b}, 0.5);
  const SteadyVelocity ua(a, 0.5);
  const Point x{0.4, 0.6};
  CHECK(s.velocity(x, 0.5).x1 == doctest::Approx(2.0 * ua.velocity(x, 0.0).x1));
  CHECK(s.velocity(x, -1.0).x2 == doctest::Approx(ua.velocity(x, 0.0).x2));
  CHECK(s.velocity(x, 5.0).x2 == doctest::Approx(3.0 * ua.velocity(x, 0.0).x2));
}

TEST_CASE("growth fit recovers a known rate") {
  std::vector<double> t, h;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(0.05 * i);
    h.push_back(3.0 * std::exp(2.0 * t.back()));
  }
  const GrowthRecord g = fit_gamma(t, h);
  CHECK(g.fitted_gamma == doctest::Approx(2.0));
  CHECK(g.fit_r2 == doctest::Approx(1.0));
  CHECK(g.fit_start == doctest::Approx(0.5));
  CHECK(g.fit_end == doctest::Approx(5.0));
  CHECK_THROWS_AS(fit_gamma({0.0, 1.0}, {1.0, 2.0}), InvalidArgument);
  h[3] = 0.0;
  CHECK_THROWS_AS(fit_gamma(t, h), InvalidArgument);
}

TEST_CASE("stopping time") {
  TrajectoryState p;
  p.start = {0.1, 0.01};
  for (int i = 0; i <= 10; ++i) p.history.push_back({0.1 * i, {0.1 / (1 + i), 0.01 * (1 + i)}, {}});
  const std::vector<double> ht{0.0, 0.5, 1.0}, flat{1.0, 1.0, 1.0}, steep{1.0, 5000.0, 9000.0};
  // x2 reaches x1(0) = 0.1 at i = 9, t = 0.9.
  StoppingTime s = stopping_time(p, ht, flat, 2.0, 0.1, 1e3);
  CHECK(s.reason == StopReason::x2_reaches_x10);
  CHECK(s.T0 == doctest::Approx(0.9));
  s = stopping_time(p, ht, steep, 2.0, 0.1, 1e3);
  CHECK(s.reason == StopReason::hessian_threshold);
  CHECK(s.T0 == doctest::Approx(0.5));
  s = stopping_time(p, ht, flat, 0.5, 0.1, 1e3);
  CHECK(s.reason == StopReason::horizon);
  CHECK(s.T0 == doctest::Approx(0.5));
  CHECK(stop_reason_name(StopReason::horizon) == "horizon");
}

TEST_CASE("leaving the quadrant halts tracing") {
  class Outward final : public VelocitySource {
   public:
    Point velocity(Point, double) const override { return {-1.0, 0.0}; }
  };
  const TrajectoryState t = trace({0.1, 1.0}, Outward{}, 1.0, 0.01);
  CHECK(t.halted);
  CHECK_FALSE(t.detail.empty());
  CHECK(t.time < 0.2);
}

TEST_CASE("trajectory CSV layout") {
  const ZeroVelocity z;
  const TrajectoryState t = trace({0.3, 0.7}, z, 0.2, 0.1);
  const auto path = std::filesystem::temp_directory_path() / "msqg_test_traj.csv";
  write_trajectory_csv(path, t);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "time,x1,x2,u1,u2,r,omega");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 3);
  std::filesystem::remove(path);
}

TEST_CASE("medium ratio monitor skips points outside the small-x regime") {
  const SineField w = mode(4, 1, 1);
  TrajectoryState p;
  p.history.push_back({0.0, {0.5, 0.5}, {}});
  const RatioMonitor m = medium_ratio_monitor(p, {{0.0, w}}, 0.5, 8.0, {}, false);
  CHECK(m.samples.empty());
  CHECK(m.skipped.size() == 1);
}
