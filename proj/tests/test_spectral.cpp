#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "generators.hpp"
#include "msqg/snapshot.hpp"
#include "msqg/spectral.hpp"

using namespace msqg;

namespace {

SineField mode(int order, int m, int n, double a = 1.0) {
  SineField f(order);
  f.at(m, n) = a;
  return f;
}

double max_diff(const GridField& a, const GridField& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) d = std::max(d, std::abs(a.values()[i] - b.values()[i]));
  return d;
}

}  // namespace

TEST_CASE("single mode synthesizes to the product of sines") {
  const SineField f = mode(8, 2, 3);
  const GridField g = inverse_transform(f, 32);
  double err = 0.0;
  for (int i = 0; i <= 32; ++i) {
    for (int j = 0; j <= 32; ++j) {
      const double x1 = g.coordinate(i), x2 = g.coordinate(j);
      err = std::max(err, std::abs(g.at(i, j) - std::sin(2 * x1) * std::sin(3 * x2)));
    }
  }
  CHECK(err < 1e-14);
}

TEST_CASE("forward transform inverts synthesis") {
  gen::Source src(11);
  for (int k = 0; k < gen::kCases; ++k) {
    const int order = src.integer(2, 24);
    const int intervals = 2 * order + 2 * src.integer(0, 8);
    const SineField f = src.field(order);
    const SineField back = forward_transform(inverse_transform(f, intervals), order);
    double err = 0.0;
    for (std::size_t i = 0; i < f.coeffs().size(); ++i) err = std::max(err, std::abs(back.coeffs()[i] - f.coeffs()[i]));
    CHECK(err < 1e-13);
  }
}

TEST_CASE("grid synthesis agrees with direct off-grid summation") {
  gen::Source src(12);
  const SineField f = src.field(10);
  const GridField g = inverse_transform(f, 24);
  for (int k = 0; k < gen::kCases; ++k) {
    const int i = src.integer(0, 24), j = src.integer(0, 24);
    CHECK(g.at(i, j) == doctest::Approx(evaluate_offgrid(f, {g.coordinate(i), g.coordinate(j)})).epsilon(1e-12));
  }
}

TEST_CASE("off-grid evaluation is odd in each variable and 2 pi periodic") {
  gen::Source src(13);
  const SineField f = src.field(6);
  for (int k = 0; k < gen::kCases; ++k) {
    const Point x = src.quadrant_point(0.0);
    const double v = evaluate_offgrid(f, x);
    CHECK(evaluate_offgrid(f, {-x.x1, x.x2}) == doctest::Approx(-v));
    CHECK(evaluate_offgrid(f, {x.x1, -x.x2}) == doctest::Approx(-v));
    CHECK(evaluate_offgrid(f, {x.x1 + 2 * kPi, x.x2 - 2 * kPi}) == doctest::Approx(v));
  }
}

TEST_CASE("fractional inverse Laplacian divides by a power of the wavenumber") {
  const SineField f = mode(4, 1, 1, 3.0);
  CHECK(fractional_inverse_laplacian(f, 0.5).at(1, 1) == doctest::Approx(3.0 / std::sqrt(2.0)));
  CHECK(fractional_inverse_laplacian(f, 0.0).at(1, 1) == doctest::Approx(1.5));
  const SineField g = mode(4, 3, 4);
  CHECK(fractional_inverse_laplacian(g, 0.25).at(3, 4) == doctest::Approx(std::pow(25.0, -0.75)));
  CHECK_THROWS_AS(fractional_inverse_laplacian(f, 1.0), InvalidArgument);
  CHECK_THROWS_AS(fractional_inverse_laplacian(f, -0.1), InvalidArgument);
}

TEST_CASE("velocity of sin x1 sin x2") {
  // psi = sin x1 sin x2 / 2^(1 - a), u = (-d2 psi, d1 psi).
  for (double alpha : {0.0, 0.25, 0.5, 0.75}) {
    const VelocityField u = velocity_from_vorticity(mode(4, 1, 1), alpha, 16);
    const double s = std::pow(2.0, alpha - 1.0);
    GridField e1(16), e2(16);
    for (int i = 0; i <= 16; ++i) {
      for (int j = 0; j <= 16; ++j) {
        const double x1 = e1.coordinate(i), x2 = e1.coordinate(j);
        e1.at(i, j) = -s * std::sin(x1) * std::cos(x2);
        e2.at(i, j) = s * std::cos(x1) * std::sin(x2);
      }
    }
    CHECK(max_diff(u.u1, e1) < 1e-14);
    CHECK(max_diff(u.u2, e2) < 1e-14);
  }
}

TEST_CASE("spectral derivatives match finite differences") {
  gen::Source src(14);
  const SineField f = src.field(6, 3.0);
  const double h = 1e-4;
  for (int k = 0; k < 10; ++k) {
    const Point x = src.quadrant_point();
    const double fd1 = (evaluate_offgrid(f, {x.x1 + h, x.x2}) - evaluate_offgrid(f, {x.x1 - h, x.x2})) / (2 * h);
    const double fd22 = (evaluate_offgrid(f, {x.x1, x.x2 + h}) - 2 * evaluate_offgrid(f, x) +
                         evaluate_offgrid(f, {x.x1, x.x2 - h})) /
                        (h * h);
    CHECK(evaluate_offgrid(spectral_derivative(f, 1, 1), x) == doctest::Approx(fd1).epsilon(1e-6));
    CHECK(evaluate_offgrid(spectral_derivative(f, 2, 2), x) == doctest::Approx(fd22).epsilon(1e-4));
    const MixedField d12 = spectral_derivative(spectral_derivative(f, 1, 1), 2, 1);
    const MixedField d21 = spectral_derivative(spectral_derivative(f, 2, 1), 1, 1);
    CHECK(evaluate_offgrid(d12, x) == doctest::Approx(evaluate_offgrid(d21, x)));
  }
}

TEST_CASE("Hessian and gradient sup norms of single modes") {
  // sin(m x1) sin(n x2): |d11| <= m^2, |d12| <= m n, |d22| <= n^2, attained on a fine enough grid.
  CHECK(hessian_sup_norm(mode(4, 1, 1), 16) == doctest::Approx(1.0));
  CHECK(hessian_sup_norm(mode(4, 2, 3), 24) == doctest::Approx(9.0));
  CHECK(gradient_sup_norm(mode(4, 2, 3), 24) == doctest::Approx(3.0));
  CHECK(hessian_sup_norm(SineField(4), 16) == 0.0);
}

TEST_CASE("spectral L2 matches the grid norm for band-limited fields") {
  gen::Source src(15);
  for (int k = 0; k < gen::kCases; ++k) {
    const int order = src.integer(1, 12);
    const SineField f = src.field(order);
    const GridField g = inverse_transform(f, 2 * order + 2);
    CHECK(std::sqrt(spectral_l2_squared(f)) == doctest::Approx(g.l2_norm()).epsilon(1e-12));
  }
}

TEST_CASE("resizing pads and truncates") {
  const SineField f = mode(4, 4, 2, 2.0);
  const SineField up = f.resized(6);
  CHECK(up.at(4, 2) == 2.0);
  CHECK(up.at(6, 6) == 0.0);
  CHECK(f.resized(3).at(3, 2) == 0.0);
}

TEST_CASE("snapshot files round trip") {
  gen::Source src(16);
  const SineField f = src.field(5);
  const auto path = std::filesystem::temp_directory_path() / "msqg_test_snapshot.bin";
  write_snapshot(path, {f, 10, 0.5, 1.25, "{\"note\":\"x\"}"});
  const Snapshot s = read_snapshot(path);
  CHECK(s.field.order() == 5);
  CHECK(s.intervals == 10);
  CHECK(s.alpha == 0.5);
  CHECK(s.time == 1.25);
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) CHECK(s.field.coeffs()[i] == f.coeffs()[i]);
  std::filesystem::remove(path);
  CHECK_THROWS(read_snapshot(path));
}

TEST_CASE("invalid sizes are rejected") {
  CHECK_THROWS_AS(forward_transform(GridField(8), 5), InvalidArgument);
  CHECK_THROWS_AS(SineField(0), InvalidArgument);
}
