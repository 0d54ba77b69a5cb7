#include "tpi/kernels/ch74.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <limits>

namespace tpi::kernels::neon {

namespace {

inline float64x2_t values2(const Ch74Row& row, float64x2_t base, float64x2_t half,
                           float64x2_t one, std::size_t l) {
  const float64x2_t c = vld1q_f64(row.cos_table.data() + l);
  const float64x2_t e = vld1q_f64(row.cos_table.data() + l + row.shift);
  return vsubq_f64(vmulq_f64(half, vaddq_f64(vaddq_f64(base, c), e)), one);
}

inline double scalar_value(const Ch74Row& row, std::size_t l) {
  return 0.5 * ((row.base + row.cos_table[l]) + row.cos_table[l + row.shift]) - 1.0;
}

}  // namespace

void ch74_row(const Ch74Row& row, std::span<double> out) {
  const float64x2_t base = vdupq_n_f64(row.base);
  const float64x2_t half = vdupq_n_f64(0.5);
  const float64x2_t one = vdupq_n_f64(1.0);
  std::size_t l = row.begin;
  for (; l + 2 <= row.end; l += 2) {
    vst1q_f64(out.data() + (l - row.begin), values2(row, base, half, one, l));
  }
  for (; l < row.end; ++l) out[l - row.begin] = scalar_value(row, l);
}

RowExtrema ch74_row_extrema(const Ch74Row& row) {
  const float64x2_t base = vdupq_n_f64(row.base);
  const float64x2_t half = vdupq_n_f64(0.5);
  const float64x2_t one = vdupq_n_f64(1.0);
  const float64x2_t two = vdupq_n_f64(2.0);

  float64x2_t vmax = vdupq_n_f64(-std::numeric_limits<double>::infinity());
  float64x2_t vmin = vdupq_n_f64(std::numeric_limits<double>::infinity());
  float64x2_t imax = vdupq_n_f64(-1.0);
  float64x2_t imin = vdupq_n_f64(-1.0);
  const double b = static_cast<double>(row.begin);
  const double start[2] = {b, b + 1.0};
  float64x2_t idx = vld1q_f64(start);

  std::size_t l = row.begin;
  for (; l + 2 <= row.end; l += 2) {
    const float64x2_t v = values2(row, base, half, one, l);
    const uint64x2_t gt = vcgtq_f64(v, vmax);
    const uint64x2_t lt = vcltq_f64(v, vmin);
    vmax = vbslq_f64(gt, v, vmax);
    imax = vbslq_f64(gt, idx, imax);
    vmin = vbslq_f64(lt, v, vmin);
    imin = vbslq_f64(lt, idx, imin);
    idx = vaddq_f64(idx, two);
  }

  double mx[2], mn[2], ix[2], in[2];
  vst1q_f64(mx, vmax);
  vst1q_f64(mn, vmin);
  vst1q_f64(ix, imax);
  vst1q_f64(in, imin);

  RowExtrema r{-std::numeric_limits<double>::infinity(), row.begin,
               std::numeric_limits<double>::infinity(), row.begin};
  for (int k = 0; k < 2; ++k) {
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

}  // namespace tpi::kernels::neon

#endif
