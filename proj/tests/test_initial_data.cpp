#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "msqg/initial_data.hpp"

using namespace msqg;

TEST_CASE("profiles are monomials at the ends and one in the middle") {
  for (int blend : {2, 4}) {
    const double d = 0.25;
    for (double s : {0.01, 0.05, 0.1, 0.125}) {
      CHECK(cubic_profile(s, d, blend) == doctest::Approx(std::pow(s / d, 3)));
      CHECK(linear_profile(s, d, blend) == doctest::Approx(s / d));
      CHECK(cubic_profile(kPi - s, d, blend) == doctest::Approx(cubic_profile(s, d, blend)));
    }
    for (double s : {0.25, 1.0, kPi / 2, kPi - 0.25}) {
      CHECK(cubic_profile(s, d, blend) == 1.0);
      CHECK(linear_profile(s, d, blend) == 1.0);
    }
  }
}

TEST_CASE("bridges are as smooth as their blend order") {
  // One-sided first and second differences across a join: a jump in the
  // derivative would survive refinement, a continuous one shrinks like h.
  const double d = 0.25;
  for (int blend : {2, 4}) {
    for (double s0 : {0.5 * d, d}) {
      for (auto f : {cubic_profile, linear_profile}) {
        const auto g = [&](double s) { return f(s, d, blend); };
        const auto jump1 = [&](double h) { return std::abs((g(s0) - g(s0 - h)) / h - (g(s0 + h) - g(s0)) / h); };
        const auto jump2 = [&](double h) {
          return std::abs((g(s0) - 2 * g(s0 - h) + g(s0 - 2 * h)) / (h * h) -
                          (g(s0 + 2 * h) - 2 * g(s0 + h) + g(s0)) / (h * h));
        };
        CHECK(jump1(1e-4) < 0.6 * jump1(2e-4) + 1e-9);
        CHECK(jump2(1e-4) < 0.6 * jump2(2e-4) + 1e-6);
      }
    }
  }
}

TEST_CASE("omega0 equals the cubic monomial on the origin patch") {
  InitialDataSpec s;
  s.delta = 0.2;
  gen::Source src(41);
  for (int k = 0; k < gen::kCases; ++k) {
    const double x1 = src.uniform(0.0, 0.1), x2 = src.uniform(0.0, 0.1);
    CHECK(omega0_value(s, x1, x2) == doctest::Approx(std::pow(0.2, -4) * x1 * x1 * x1 * x2));
  }
  CHECK(omega0_value(s, 1.0, 2.0) == 1.0);
}

TEST_CASE("invalid specs are rejected") {
  InitialDataSpec s;
  s.delta = 0.0;
  CHECK_THROWS_AS(validate(s), InvalidArgument);
  s.delta = kPi / 2;
  CHECK_THROWS_AS(validate(s), InvalidArgument);
  s.delta = 0.25;
  s.blend_order = 3;
  CHECK_THROWS_AS(validate(s), InvalidArgument);
  s.blend_order = 4;
  s.N_g = s.N;
  CHECK_THROWS_AS(validate(s), InvalidArgument);
  s.N_g = 2 * s.N;
  CHECK_NOTHROW(validate(s));
}

TEST_CASE("degeneracy projection") {
  gen::Source src(42);
  for (int k = 0; k < gen::kCases; ++k) {
    SineField f = src.field(src.integer(2, 16));
    project_degenerate(f);
    for (int n = 1; n <= f.order(); ++n) {
      double s = 0.0, scale = 0.0;
      for (int m = 1; m <= f.order(); ++m) {
        s += m * f.at(m, n);
        scale += std::abs(m * f.at(m, n));
      }
      CHECK(std::abs(s) <= 1e-13 * std::max(1.0, scale));
    }
    SineField g = f;
    project_degenerate(g);
    for (std::size_t i = 0; i < f.coeffs().size(); ++i) CHECK(g.coeffs()[i] == doctest::Approx(f.coeffs()[i]));
    CHECK(check_degeneracy(f) < 1e-12);
  }
}

TEST_CASE("built data pass their checks") {
  InitialDataSpec s;
  s.delta = 0.25;
  s.N = 64;
  s.N_g = 128;
  const SineField w = build_omega0(s);
  const InitialDataChecks c = check_initial_data(s, w);
  CHECK(c.exact_min >= 0.0);
  CHECK(c.exact_max == 1.0);
  CHECK(c.defect_fraction <= c.defect_bound);
  CHECK(c.defect_bound == doctest::Approx(4.0 * 0.25 / kPi));
  CHECK(c.degeneracy_relative() < 1e-10);
  CHECK(c.range_ok(0.05));
  CHECK(c.cells_across_strip == doctest::Approx(0.25 / (kPi / 128)));
}
