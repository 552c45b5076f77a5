#include "msqg/transforms.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

namespace msqg {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Sine axes live on the interior points (RODFT00 of length N_g - 1), cosine
// axes on every point including both ends (REDFT00 of length N_g + 1).
int axis_length(Basis b, int intervals) { return b == Basis::sine ? intervals - 1 : intervals + 1; }
// Grid index of native point 0.
int first_point(Basis b) { return b == Basis::sine ? 1 : 0; }
// Native index of mode k's coefficient.
int mode_slot(Basis b, int k) { return b == Basis::sine ? k - 1 : k; }

}  // namespace

struct SineTransforms::Plan {
  fftw_plan handle = nullptr;
  int length = 0;
  ~Plan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(handle);
  }
};

SineTransforms& SineTransforms::for_grid(int intervals) {
  thread_local std::map<int, std::unique_ptr<SineTransforms>> cache;
  auto& slot = cache[intervals];
  if (!slot) slot = std::make_unique<SineTransforms>(intervals);
  return *slot;
}

SineTransforms::SineTransforms(int intervals) : intervals_(intervals) {
  require(intervals >= 4, "grid must have at least 4 intervals");
  const std::size_t n = static_cast<std::size_t>(intervals + 1) * static_cast<std::size_t>(intervals + 1);
  a_ = fftw_alloc_real(n);
  b_ = fftw_alloc_real(n);
  if (a_ == nullptr || b_ == nullptr) throw std::bad_alloc();
}

SineTransforms::~SineTransforms() {
  plans_.clear();
  fftw_free(a_);
  fftw_free(b_);
}

// Batched in-place transform of `batch` contiguous rows of the axis length.
double* SineTransforms::run(Basis kind, int batch, double* data) {
  const auto key = std::make_tuple(static_cast<int>(kind), batch, data == a_ ? 0 : 1);
  auto& p = plans_[key];
  if (!p) {
    p = std::make_unique<Plan>();
    p->length = axis_length(kind, intervals_);
    fftw_r2r_kind k = kind == Basis::sine ? FFTW_RODFT00 : FFTW_REDFT00;
    std::lock_guard<std::mutex> lock(planner_mutex());
    p->handle = fftw_plan_many_r2r(1, &p->length, batch, data, nullptr, 1, p->length, data, nullptr, 1, p->length,
                                   &k, FFTW_ESTIMATE);
    if (p->handle == nullptr) throw NumericalError("FFTW could not create an r2r plan");
  }
  fftw_execute_r2r(p->handle, data, data);
  return data;
}

void SineTransforms::synthesize_native(std::span<const double> coeffs, int order, Basis b1, Basis b2) {
  require(2 * order <= intervals_, "grid too coarse for the series order (need N_g >= 2N)");
  const int l1 = axis_length(b1, intervals_);
  const int l2 = axis_length(b2, intervals_);
  // Both r2r kinds double interior modes, hence the 1/2 per axis.
  std::fill(a_, a_ + static_cast<std::size_t>(order) * l2, 0.0);
  for (int m = 1; m <= order; ++m) {
    double* row = a_ + static_cast<std::size_t>(m - 1) * l2;
    const double* src = coeffs.data() + static_cast<std::size_t>(m - 1) * order;
    for (int n = 1; n <= order; ++n) row[mode_slot(b2, n)] = 0.5 * src[n - 1];
  }
  run(b2, order, a_);
  std::fill(b_, b_ + static_cast<std::size_t>(l2) * l1, 0.0);
  for (int m = 1; m <= order; ++m) {
    const double* row = a_ + static_cast<std::size_t>(m - 1) * l2;
    const int slot = mode_slot(b1, m);
    for (int j = 0; j < l2; ++j) b_[static_cast<std::size_t>(j) * l1 + slot] = 0.5 * row[j];
  }
  run(b1, l2, b_);
}

void SineTransforms::synthesize_interior(std::span<const double> coeffs, int order, Basis b1, Basis b2,
                                         std::span<double> out, bool transposed) {
  synthesize_native(coeffs, order, b1, b2);
  const int l1 = axis_length(b1, intervals_);
  const int n = interior();
  // Interior grid index g (1..N_g-1) is native index g - first_point.
  const int o1 = 1 - first_point(b1);
  const int o2 = 1 - first_point(b2);
  for (int j = 0; j < n; ++j) {
    const double* src = b_ + static_cast<std::size_t>(j + o2) * l1 + o1;
    if (transposed) {
      std::copy(src, src + n, out.begin() + static_cast<std::ptrdiff_t>(j) * n);
    } else {
      for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i) * n + j] = src[i];
    }
  }
}

void SineTransforms::synthesize_full(std::span<const double> coeffs, int order, Basis b1, Basis b2, GridField& out) {
  synthesize_native(coeffs, order, b1, b2);
  if (out.intervals() != intervals_) out = GridField(intervals_);
  auto v = out.values();
  std::fill(v.begin(), v.end(), 0.0);  // sine boundaries stay zero
  const int l1 = axis_length(b1, intervals_);
  const int l2 = axis_length(b2, intervals_);
  const int f1 = first_point(b1);
  const int f2 = first_point(b2);
  for (int i = 0; i < l1; ++i) {
    for (int j = 0; j < l2; ++j) out.at(i + f1, j + f2) = b_[static_cast<std::size_t>(j) * l1 + i];
  }
}

void SineTransforms::analyze_interior(std::span<const double> values, int order, std::span<double> coeffs,
                                      bool transposed) {
  require(2 * order <= intervals_, "grid too coarse for the series order (need N_g >= 2N)");
  const int n = interior();
  // First pass along the contiguous axis, keep the first `order` modes,
  // transpose, second pass over `order` rows.
  std::copy(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(n) * n, a_);
  run(Basis::sine, n, a_);
  for (int r = 0; r < n; ++r) {
    const double* row = a_ + static_cast<std::size_t>(r) * n;
    for (int k = 0; k < order; ++k) b_[static_cast<std::size_t>(k) * n + r] = row[k];
  }
  run(Basis::sine, order, b_);
  const double scale = 1.0 / (static_cast<double>(intervals_) * intervals_);
  // b_[k][q]: k is the mode along the contiguous input axis.
  for (int k = 0; k < order; ++k) {
    for (int q = 0; q < order; ++q) {
      const double v = scale * b_[static_cast<std::size_t>(k) * n + q];
      if (transposed) {
        coeffs[static_cast<std::size_t>(k) * order + q] = v;  // contiguous axis was x1
      } else {
        coeffs[static_cast<std::size_t>(q) * order + k] = v;
      }
    }
  }
}

}  // namespace msqg
