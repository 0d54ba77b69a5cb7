#pragma once

// Row kernels for the cancelled CH74 expression on a uniform phase grid.
//
// With phases quantized to 2*pi*k/N, every cosine is a table lookup and a row
// of the scan (fixed d12 and d12', varying d1'2) reduces to
//
//   value[l] = 0.5 * ((base + T[l]) + T[l + shift]) - 1.0
//
// where T[k] = cos(2*pi*k/N) for k in [0, 2N), base = T[i] - T[j] and
// shift = (j - i) mod N. Every variant performs the same operations in the
// same order, so results are bit-identical across instruction sets.

#include <cstddef>
#include <span>
#include <string_view>

namespace tpi::kernels {

enum class SimdLevel { scalar, avx2, neon };

std::string_view to_string(SimdLevel level);

struct Ch74Row {
  std::span<const double> cos_table;  ///< 2N entries
  double base = 0.0;
  std::size_t shift = 0;
  std::size_t begin = 0;  ///< first l
  std::size_t end = 0;    ///< one past the last l; begin < end <= N
};

/// First-occurrence extrema of a row; indices are absolute l values.
struct RowExtrema {
  double max_value;
  std::size_t max_index;
  double min_value;
  std::size_t min_index;
};

namespace scalar {
void ch74_row(const Ch74Row& row, std::span<double> out);
RowExtrema ch74_row_extrema(const Ch74Row& row);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void ch74_row(const Ch74Row& row, std::span<double> out);
RowExtrema ch74_row_extrema(const Ch74Row& row);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
void ch74_row(const Ch74Row& row, std::span<double> out);
RowExtrema ch74_row_extrema(const Ch74Row& row);
}  // namespace neon
#endif

struct Ch74Kernels {
  SimdLevel level;
  void (*row)(const Ch74Row&, std::span<double>);
  RowExtrema (*row_extrema)(const Ch74Row&);
};

/// True if this build contains the variant and the running CPU supports it.
bool simd_available(SimdLevel level);

/// Best available level, unless TPI_SIMD=scalar|avx2|neon requests another
/// (an unavailable request falls back to scalar).
SimdLevel detect_simd_level();

/// Throws std::invalid_argument if the level is unavailable.
const Ch74Kernels& ch74_kernels(SimdLevel level);
const Ch74Kernels& ch74_kernels();

}  // namespace tpi::kernels
