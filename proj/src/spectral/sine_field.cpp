#include <algorithm>
#include <cmath>

#include "msqg/simd.hpp"
#include "msqg/spectral.hpp"

namespace msqg {

SineField::SineField(int order) : order_(order) {
  require(order >= 1, "sine series order must be positive");
  coeffs_.assign(static_cast<std::size_t>(order) * static_cast<std::size_t>(order), 0.0);
}

SineField::SineField(int order, std::vector<double> coeffs) : order_(order), coeffs_(std::move(coeffs)) {
  require(order >= 1, "sine series order must be positive");
  require(coeffs_.size() == static_cast<std::size_t>(order) * static_cast<std::size_t>(order),
          "coefficient array does not match the series order");
}

bool SineField::all_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double v) { return std::isfinite(v); });
}

SineField SineField::resized(int order) const {
  SineField out(order);
  const int k = std::min(order, order_);
  for (int m = 1; m <= k; ++m) {
    for (int n = 1; n <= k; ++n) out.at(m, n) = at(m, n);
  }
  return out;
}

GridField::GridField(int intervals) : intervals_(intervals) {
  require(intervals >= 2, "grid needs at least two intervals");
  values_.assign(static_cast<std::size_t>(points()) * static_cast<std::size_t>(points()), 0.0);
}

double GridField::max_abs() const { return simd::active().max_abs(values_); }

double GridField::l2_norm() const {
  const double h = spacing();
  return std::sqrt(h * h * simd::active().sum_squares(values_));
}

MixedField MixedField::from(const SineField& f) {
  MixedField out;
  out.order = f.order();
  out.coeffs.assign(f.coeffs().begin(), f.coeffs().end());
  return out;
}

}  // namespace msqg
