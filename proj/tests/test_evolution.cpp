#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "msqg/evolution.hpp"

using namespace msqg;

namespace {

double max_abs_diff(const SineField& a, const SineField& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) d = std::max(d, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  return d;
}

// Sine coefficients of -(u . grad w) by trapezoid quadrature of the pointwise
// product, which is exact for the trigonometric polynomials involved.
SineField jacobian_oracle(const SineField& w, double alpha) {
  const int N = w.order(), M = 8 * N;
  const VelocityCoefficients u = velocity_coefficients(w, alpha);
  const MixedField w1 = spectral_derivative(w, 1, 1), w2 = spectral_derivative(w, 2, 1);
  SineField out(N);
  const double h = kPi / M;
  for (int i = 1; i < M; ++i) {
    for (int j = 1; j < M; ++j) {
      const Point x{i * h, j * h};
      const double J = -(evaluate_offgrid(u.u1, x) * evaluate_offgrid(w1, x) +
                         evaluate_offgrid(u.u2, x) * evaluate_offgrid(w2, x));
      for (int m = 1; m <= N; ++m) {
        for (int n = 1; n <= N; ++n) out.at(m, n) += J * std::sin(m * x.x1) * std::sin(n * x.x2) * 4.0 * h * h / (kPi * kPi);
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("nonlinear term matches the dealiased product at N = 4") {
  gen::Source src(51);
  for (double alpha : {0.0, 0.5, 0.8}) {
    const SineField w = src.field(4, 0.0);
    const SineField expected = jacobian_oracle(w, alpha);
    CHECK(max_abs_diff(nonlinear_term(w, alpha), expected) < 1e-12);
    Stepper st(4, 8, alpha);
    SineField out;
    st.rhs(w, out);
    CHECK(max_abs_diff(out, expected) < 1e-12);
  }
}

TEST_CASE("single modes are stationary") {
  gen::Source src(52);
  for (int k = 0; k < 10; ++k) {
    SineField w(8);
    w.at(src.integer(1, 8), src.integer(1, 8)) = src.uniform(-2.0, 2.0);
    const double alpha = src.uniform(0.0, 0.9);
    double worst = 0.0;
    for (double c : nonlinear_term(w, alpha).coeffs()) worst = std::max(worst, std::abs(c));
    CHECK(worst < 1e-13);
  }
}

TEST_CASE("RK4 converges at fourth order") {
  gen::Source src(53);
  const SineField w0 = src.field(6, 1.0);
  const auto integrate = [&](double dt, double T) {
    Stepper st(6, 12, 0.5);
    SineField w = w0;
    const int steps = static_cast<int>(std::lround(T / dt));
    for (int i = 0; i < steps; ++i) st.step_rk4(w, dt);
    return w;
  };
  const SineField ref = integrate(0.2 / 256, 0.2);
  const double e1 = max_abs_diff(integrate(0.2 / 8, 0.2), ref);
  const double e2 = max_abs_diff(integrate(0.2 / 16, 0.2), ref);
  const double e3 = max_abs_diff(integrate(0.2 / 32, 0.2), ref);
  CHECK(std::log2(e1 / e2) == doctest::Approx(4.0).epsilon(0.08));
  CHECK(std::log2(e2 / e3) == doctest::Approx(4.0).epsilon(0.08));
}

TEST_CASE("L2 norm is conserved by the semi-discrete flow") {
  gen::Source src(54);
  const SineField w0 = src.field(8, 2.0);
  Stepper st(8, 16, 0.5);
  SineField w = w0;
  for (int i = 0; i < 100; ++i) st.step_rk4(w, 1e-3);
  const double a = spectral_l2_squared(w0), b = spectral_l2_squared(w);
  CHECK(std::abs(b - a) / a < 1e-8);
}

TEST_CASE("CFL step") {
  CHECK(cfl_dt_from_speed(2.0, 64, 0.5, 1e-6, 1.0) == doctest::Approx(0.5 * (kPi / 64) / 2.0));
  CHECK(cfl_dt_from_speed(0.0, 64, 0.5, 1e-6, 0.3) == 0.3);
  CHECK(cfl_dt_from_speed(1e12, 64, 0.5, 1e-6, 0.3) == 1e-6);
}

TEST_CASE("run: stationary mode keeps flat diagnostics") {
  for (double alpha : {0.0, 0.5}) {
    ExperimentConfig c;
    c.alpha = alpha;
    c.initial = InitialKind::single_mode;
    c.mode_m = 2;
    c.mode_n = 1;
    c.N = 8;
    c.N_g = 16;
    c.T = 1.0;
    c.diag_interval = 0.25;
    const RunResult r = run(c);
    CHECK(r.reason == HaltReason::horizon);
    CHECK(r.records.size() == 5);
    CHECK(max_abs_diff(r.final_state.omega, initial_field(c)) < 1e-10);
    for (const auto& d : r.records) CHECK(d.hessian_sup == doctest::Approx(r.records.front().hessian_sup));
  }
}

TEST_CASE("run: T = 0 gives the initial record only") {
  ExperimentConfig c;
  c.N = 16;
  c.N_g = 32;
  c.T = 0.0;
  const RunResult r = run(c);
  CHECK(r.records.size() == 1);
  CHECK(r.final_state.step_count == 0);
  CHECK(r.reason == HaltReason::horizon);
}

TEST_CASE("run: zero data stay zero") {
  ExperimentConfig c;
  c.initial = InitialKind::zero;
  c.N = 8;
  c.N_g = 16;
  c.T = 0.1;
  const RunResult r = run(c);
  CHECK(r.reason == HaltReason::horizon);
  for (double v : r.final_state.omega.coeffs()) CHECK(v == 0.0);
}

TEST_CASE("observer can stop a run") {
  ExperimentConfig c;
  c.N = 8;
  c.N_g = 16;
  c.T = 1.0;
  c.dt_policy = DtPolicy::fixed;
  c.dt = 0.01;
  c.tail_threshold = 1.0;  // coarse omega0 data start above the default tail limit
  int calls = 0;
  const RunResult r = run(c, [&](const SimState&, double) { return ++calls < 5; });
  CHECK(r.reason == HaltReason::stopped);
  CHECK(r.final_state.step_count == 4);
}

TEST_CASE("config validation") {
  ExperimentConfig c;
  CHECK_NOTHROW(validate(c));
  c.N_g = c.N;
  CHECK_THROWS_AS(validate(c), InvalidArgument);
  c = {};
  c.alpha = 1.0;
  CHECK_THROWS_AS(validate(c), InvalidArgument);
  c = {};
  c.T = -1.0;
  CHECK_THROWS_AS(validate(c), InvalidArgument);
}

TEST_CASE("spectral tail") {
  SineField w(8);
  w.at(1, 1) = 1.0;
  CHECK(spectral_tail(w) == 0.0);
  w.at(8, 1) = 1.0;
  CHECK(spectral_tail(w) == doctest::Approx(std::sqrt(0.5)));
  CHECK(halt_name(HaltReason::resolution_exhausted) == "resolution exhausted");
}
