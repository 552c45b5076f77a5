#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_internal.hpp"

namespace msqg::simd {
namespace {

Isa best_available() { return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

Isa initial_isa() {
  if (const char* env = std::getenv("MSQG_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Isa::scalar;
    if (v == "avx2" && isa_available(Isa::avx2)) return Isa::avx2;
  }
  return best_available();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> t{&table(initial_isa())};
  return t;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
  if (isa == Isa::scalar) return true;
#if defined(MSQG_HAVE_AVX2)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& table(Isa isa) {
#if defined(MSQG_HAVE_AVX2)
  if (isa == Isa::avx2) {
    if (!isa_available(Isa::avx2)) throw std::runtime_error("AVX2 kernels not supported on this CPU");
    return detail::avx2_table();
  }
#else
  if (isa == Isa::avx2) throw std::runtime_error("AVX2 kernels not compiled in");
#endif
  return detail::scalar_table();
}

Isa active_isa() { return current().load()->isa; }

void set_active_isa(Isa isa) { current().store(&table(isa)); }

const KernelTable& active() { return *current().load(); }

}  // namespace msqg::simd
