#pragma once

#include "mstab/kernels.hpp"

namespace mstab::kernels::detail {

#if defined(MSTAB_BUILD_AVX2)
const Table& avx2_impl() noexcept;
#endif
#if defined(MSTAB_BUILD_NEON)
const Table& neon_impl() noexcept;
#endif

}  // namespace mstab::kernels::detail
