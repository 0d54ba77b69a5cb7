#include "tpi/kernels/ch74.hpp"

namespace tpi::kernels::scalar {

namespace {

inline double value_at(const Ch74Row& row, std::size_t l) {
  return 0.5 * ((row.base + row.cos_table[l]) + row.cos_table[l + row.shift]) - 1.0;
}

}  // namespace

void ch74_row(const Ch74Row& row, std::span<double> out) {
  for (std::size_t l = row.begin; l < row.end; ++l) {
    out[l - row.begin] = value_at(row, l);
  }
}

RowExtrema ch74_row_extrema(const Ch74Row& row) {
  RowExtrema r{value_at(row, row.begin), row.begin, value_at(row, row.begin), row.begin};
  for (std::size_t l = row.begin + 1; l < row.end; ++l) {
    const double v = value_at(row, l);
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

}  // namespace tpi::kernels::scalar
