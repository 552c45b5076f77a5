#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace msqg {

inline constexpr double kPi = std::numbers::pi;

/// A point of the plane (or of the torus, depending on context).
struct Point {
  double x1 = 0.0;
  double x2 = 0.0;

  double norm() const { return std::hypot(x1, x2); }
  double component(int j) const { return j == 1 ? x1 : x2; }

  friend Point operator+(Point a, Point b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend Point operator-(Point a, Point b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
  friend Point operator*(double s, Point a) { return {s * a.x1, s * a.x2}; }
  friend bool operator==(Point a, Point b) = default;
};

/// Thrown when an input violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a computation produced non-finite values or lost validity.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

inline void require_alpha_open(double alpha) {
  require(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0,
          "alpha must lie in the open interval (0, 1), got " + std::to_string(alpha));
}

/// Spectral operations also accept the Euler limit alpha = 0.
inline void require_alpha_half_open(double alpha) {
  require(std::isfinite(alpha) && alpha >= 0.0 && alpha < 1.0,
          "alpha must lie in [0, 1), got " + std::to_string(alpha));
}

}  // namespace msqg
