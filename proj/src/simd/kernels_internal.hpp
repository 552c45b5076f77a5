#pragma once

#include "msqg/simd.hpp"

namespace msqg::simd::detail {

const KernelTable& scalar_table();
#if defined(MSQG_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

// Squared distances below this are clamped before the power is applied; such
// nodes always carry zero weight.
inline constexpr double kMinSquaredDistance = 1e-100;

}  // namespace msqg::simd::detail
