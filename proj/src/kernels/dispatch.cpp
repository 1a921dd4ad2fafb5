#include <cstdlib>
#include <string_view>

#include "rabi/kernels.hpp"

namespace rabi::kernels {

#if defined(RABI_RELAX_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

const KernelTable* avx2() {
#if defined(RABI_RELAX_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? &avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable* chosen = [] {
    const char* forced = std::getenv("RABI_RELAX_KERNELS");
    if (forced != nullptr && std::string_view(forced) == "scalar") return &scalar();
    if (const KernelTable* t = avx2()) return t;
    return &scalar();
  }();
  return *chosen;
}

}  // namespace rabi::kernels
