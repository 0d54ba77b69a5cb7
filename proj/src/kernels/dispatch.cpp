#include <cstdlib>
#include <stdexcept>
#include <string>

#include "tpi/kernels/ch74.hpp"

namespace tpi::kernels {

namespace {

constexpr Ch74Kernels scalar_kernels{SimdLevel::scalar, &scalar::ch74_row,
                                     &scalar::ch74_row_extrema};
#if defined(__x86_64__) || defined(_M_X64)
constexpr Ch74Kernels avx2_kernels{SimdLevel::avx2, &avx2::ch74_row, &avx2::ch74_row_extrema};
#endif
#if defined(__aarch64__)
constexpr Ch74Kernels neon_kernels{SimdLevel::neon, &neon::ch74_row, &neon::ch74_row_extrema};
#endif

}  // namespace

std::string_view to_string(SimdLevel level) {
  switch (level) {
    case SimdLevel::scalar:
      return "scalar";
    case SimdLevel::avx2:
      return "avx2";
    case SimdLevel::neon:
      return "neon";
  }
  return "unknown";
}

bool simd_available(SimdLevel level) {
  switch (level) {
    case SimdLevel::scalar:
      return true;
    case SimdLevel::avx2:
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case SimdLevel::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

SimdLevel detect_simd_level() {
  if (const char* env = std::getenv("TPI_SIMD")) {
    const std::string requested(env);
    for (SimdLevel level : {SimdLevel::scalar, SimdLevel::avx2, SimdLevel::neon}) {
      if (requested == to_string(level)) {
        return simd_available(level) ? level : SimdLevel::scalar;
      }
    }
  }
  if (simd_available(SimdLevel::avx2)) return SimdLevel::avx2;
  if (simd_available(SimdLevel::neon)) return SimdLevel::neon;
  return SimdLevel::scalar;
}

const Ch74Kernels& ch74_kernels(SimdLevel level) {
  if (!simd_available(level)) {
    throw std::invalid_argument("SIMD level " + std::string(to_string(level)) +
                                " is not available on this CPU");
  }
  switch (level) {
#if defined(__x86_64__) || defined(_M_X64)
    case SimdLevel::avx2:
      return avx2_kernels;
#endif
#if defined(__aarch64__)
    case SimdLevel::neon:
      return neon_kernels;
#endif
    default:
      return scalar_kernels;
  }
}

const Ch74Kernels& ch74_kernels() {
  static const Ch74Kernels& selected = ch74_kernels(detect_simd_level());
  return selected;
}

}  // namespace tpi::kernels
