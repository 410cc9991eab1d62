#include "physmocap/simd/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace physmocap::simd {

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

Isa pick_isa() {
  if (const char* env = std::getenv("PHYSMOCAP_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return Isa::kScalar;
    if (std::strcmp(env, "avx2") == 0 && avx2_kernels() != nullptr)
      return Isa::kAvx2;
    // Unknown or unavailable value falls through to auto detection.
  }
  return (avx2_supported() && avx2_kernels() != nullptr) ? Isa::kAvx2
                                                         : Isa::kScalar;
}

}  // namespace

Isa active_isa() {
  static const Isa isa = pick_isa();
  return isa;
}

const Kernels& kernels() {
  static const Kernels& k =
      active_isa() == Isa::kAvx2 ? *avx2_kernels() : scalar_kernels();
  return k;
}

std::string isa_name(Isa isa) {
  return isa == Isa::kAvx2 ? "avx2" : "scalar";
}

}  // namespace physmocap::simd
