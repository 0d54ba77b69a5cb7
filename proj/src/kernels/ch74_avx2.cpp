#include "tpi/kernels/ch74.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <limits>

#define TPI_AVX2 __attribute__((target("avx2")))

namespace tpi::kernels::avx2 {

namespace {

TPI_AVX2 inline __m256d values4(const Ch74Row& row, __m256d base, __m256d half, __m256d one,
                                std::size_t l) {
  const __m256d c = _mm256_loadu_pd(row.cos_table.data() + l);
  const __m256d e = _mm256_loadu_pd(row.cos_table.data() + l + row.shift);
  return _mm256_sub_pd(_mm256_mul_pd(half, _mm256_add_pd(_mm256_add_pd(base, c), e)), one);
}

inline double scalar_value(const Ch74Row& row, std::size_t l) {
  return 0.5 * ((row.base + row.cos_table[l]) + row.cos_table[l + row.shift]) - 1.0;
}

}  // namespace

TPI_AVX2 void ch74_row(const Ch74Row& row, std::span<double> out) {
  const __m256d base = _mm256_set1_pd(row.base);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t l = row.begin;
  for (; l + 4 <= row.end; l += 4) {
    _mm256_storeu_pd(out.data() + (l - row.begin), values4(row, base, half, one, l));
  }
  for (; l < row.end; ++l) out[l - row.begin] = scalar_value(row, l);
}

TPI_AVX2 RowExtrema ch74_row_extrema(const Ch74Row& row) {
  const __m256d base = _mm256_set1_pd(row.base);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d four = _mm256_set1_pd(4.0);

  __m256d vmax = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  __m256d vmin = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  __m256d imax = _mm256_set1_pd(-1.0);
  __m256d imin = _mm256_set1_pd(-1.0);
  const double b = static_cast<double>(row.begin);
  __m256d idx = _mm256_setr_pd(b, b + 1.0, b + 2.0, b + 3.0);

  std::size_t l = row.begin;
  for (; l + 4 <= row.end; l += 4) {
    const __m256d v = values4(row, base, half, one, l);
    const __m256d gt = _mm256_cmp_pd(v, vmax, _CMP_GT_OQ);
    const __m256d lt = _mm256_cmp_pd(v, vmin, _CMP_LT_OQ);
    vmax = _mm256_blendv_pd(vmax, v, gt);
    imax = _mm256_blendv_pd(imax, idx, gt);
    vmin = _mm256_blendv_pd(vmin, v, lt);
    imin = _mm256_blendv_pd(imin, idx, lt);
    idx = _mm256_add_pd(idx, four);
  }

  alignas(32) double mx[4], mn[4], ix[4], in[4];
  _mm256_store_pd(mx, vmax);
  _mm256_store_pd(mn, vmin);
  _mm256_store_pd(ix, imax);
  _mm256_store_pd(in, imin);

  RowExtrema r{-std::numeric_limits<double>::infinity(), row.begin,
               std::numeric_limits<double>::infinity(), row.begin};
  // Lanes hold first occurrences; among equal lane values keep the lowest index.
  for (int k = 0; k < 4; ++k) {
    if (ix[k] < 0.0) continue;
    const auto i = static_cast<std::size_t>(ix[k]);
    if (mx[k] > r.max_value || (mx[k] == r.max_value && i < r.max_index)) {
      r.max_value = mx[k];
      r.max_index = i;
    }
    const auto j = static_cast<std::size_t>(in[k]);
    if (mn[k] < r.min_value || (mn[k] == r.min_value && j < r.min_index)) {
      r.min_value = mn[k];
      r.min_index = j;
    }
  }
  for (; l < row.end; ++l) {
    const double v = scalar_value(row, l);
    if (v > r.max_value) {
      r.max_value = v;
      r.max_index = l;
    }
    if (v < r.min_value) {
      r.min_value = v;
      r.min_index = l;
    }
  }
  return r;
}

}  // namespace tpi::kernels::avx2

#endif
