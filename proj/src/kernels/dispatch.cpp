#include <cstdlib>
#include <cstring>

#include "tcsim/kernels/kernels.hpp"

namespace tcsim::kernels {

#if defined(TCSIM_HAVE_AVX2)
const KernelTable* avx2_kernels_impl();
#endif

const KernelTable* avx2_kernels() {
#if defined(TCSIM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? avx2_kernels_impl() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable* table = [] {
    const char* forced = std::getenv("TCSIM_KERNELS");
    if (forced && std::strcmp(forced, "scalar") == 0) return &scalar_kernels();
    const KernelTable* fast = avx2_kernels();
    return fast ? fast : &scalar_kernels();
  }();
  return *table;
}

}  // namespace tcsim::kernels
