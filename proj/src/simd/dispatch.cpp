#include <cstdlib>
#include <string>

#include "mentalgen/simd/kernels.hpp"

namespace mentalgen::simd {

#if defined(__x86_64__) || defined(_M_X64)
const KernelTable* avx2_kernels_compiled() noexcept;
#endif
#if defined(__aarch64__)
const KernelTable* neon_kernels_compiled() noexcept;
#endif

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

const KernelTable* avx2_kernels() noexcept {
#if defined(__x86_64__) || defined(_M_X64)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return avx2_kernels_compiled();
#endif
  return nullptr;
}

const KernelTable* neon_kernels() noexcept {
#if defined(__aarch64__)
  return neon_kernels_compiled();
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select() noexcept {
  const char* env = std::getenv("MENTALGEN_SIMD");
  const std::string want = env ? env : "";
  if (want == "scalar") return scalar_kernels();
  if (const auto* t = avx2_kernels(); t && (want.empty() || want == "avx2")) return *t;
  if (const auto* t = neon_kernels(); t && (want.empty() || want == "neon")) return *t;
  return scalar_kernels();
}

}  // namespace

const KernelTable& active() noexcept {
  static const KernelTable& table = select();
  return table;
}

}  // namespace mentalgen::simd
