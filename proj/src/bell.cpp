#include "tpi/bell.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tpi/errors.hpp"
#include "tpi/parallel.hpp"

namespace tpi {

void BellSettings::validate() const {
  if (!(gamma > 0.0)) throw ConfigError("bell.gamma", "gamma must be positive");
  if (!(transit >= 0.0)) throw ConfigError("bell.transit", "transit time must be >= 0");
  if (!(t10 <= t20)) throw ConfigError("bell.t10", "CH74 ordering requires t10 <= t20");
  if (!(t10 - transit >= 0.0) || !(t20 - transit >= 0.0)) {
    throw ConfigError("bell.t10", "reference detection times precede the earliest emission");
  }
}

BellSettings bell_angle_settings(double gamma, double transit, double t10, double t20) {
  constexpr double pi = std::numbers::pi;
  BellSettings s;
  s.phi2 = 0.0;
  s.phi1 = pi / 4.0;
  s.phi2p = -pi / 2.0;
  s.phi1p = -pi / 4.0;
  s.t10 = t10;
  s.t20 = t20;
  s.gamma = gamma;
  s.transit = transit;
  return s;
}

Ch74Result make_ch74_result(double value, double lower_bound, double upper_bound) {
  Ch74Result r;
  r.value = value;
  r.lower_bound = lower_bound;
  r.upper_bound = upper_bound;
  r.violated = value > upper_bound + ch74_violation_tolerance ||
               value < lower_bound - ch74_violation_tolerance;
  r.margin = std::max(value - upper_bound, lower_bound - value);
  return r;
}

Ch74Result ch74_cancelled(double d12, double d12p, double d1p2, double d1p2p) {
  const double v =
      0.5 * (std::cos(d12) - std::cos(d12p) + std::cos(d1p2) + std::cos(d1p2p)) - 1.0;
  return make_ch74_result(v, -1.0, 0.0);
}

Ch74Result ch74_functional(const BellSettings& s) {
  s.validate();
  return ch74_cancelled(s.phi1 - s.phi2, s.phi1 - s.phi2p, s.phi1p - s.phi2, s.phi1p - s.phi2p);
}

Ch74Result ch74_raw(const BellSettings& s, const RawTimings& times) {
  s.validate();
  const double e1 = s.t10 - s.transit;
  const double e2 = s.t20 - s.transit;
  const double e1p = times.t1p - s.transit;
  const double e2s = times.t2 - s.transit;
  const double e1s = times.t1 - s.transit;
  const double e2p = times.t2p - s.transit;
  if (!(e1s >= 0.0 && e1p >= 0.0 && e2s >= 0.0 && e2p >= 0.0)) {
    throw ConfigError("bell.raw_times", "detection times precede the earliest emission");
  }
  auto envelope = [&](double a, double b) { return std::exp(-2.0 * s.gamma * (a + b)); };
  auto g2 = [&](double a, double b, double phi_a, double phi_b) {
    return 0.5 * envelope(a, b) * (1.0 + std::cos(phi_b - phi_a));
  };
  const double v = g2(e1s, e2s, s.phi1, s.phi2) - g2(e1s, e2p, s.phi1, s.phi2p) +
                   g2(e1p, e2s, s.phi1p, s.phi2) + g2(e1p, e2p, s.phi1p, s.phi2p) -
                   envelope(e1p, e2) - envelope(e1, e2s);
  return make_ch74_result(v, -envelope(e1, e2), 0.0);
}

std::string_view to_string(CausalityClass c) {
  switch (c) {
    case CausalityClass::no_overlap_and_no_signaling:
      return "no_overlap_and_no_signaling";
    case CausalityClass::no_overlap_only:
      return "no_overlap_only";
    case CausalityClass::overlapping:
      return "overlapping";
  }
  return "unknown";
}

CausalityClass causality_window_check(double t1, double t2, double transit) {
  if (!(t2 >= t1)) throw DomainError("causality check needs t2 >= t1");
  const double delay = t2 - t1;
  if (delay <= transit) return CausalityClass::overlapping;
  if (delay < 2.0 * transit) return CausalityClass::no_overlap_and_no_signaling;
  return CausalityClass::no_overlap_only;
}

BellGrid BellGrid::full_circle(std::size_t divisions) {
  return {divisions, {0, divisions}, {0, divisions}, {0, divisions}};
}

BellGrid BellGrid::from_step_degrees(double step_degrees) {
  if (!(step_degrees > 0.0)) throw ConfigError("bell.grid.step_deg", "grid step must be positive");
  const double n = 360.0 / step_degrees;
  const double rounded = std::round(n);
  if (std::abs(n - rounded) > 1e-9 * n) {
    throw ConfigError("bell.grid.step_deg", "360 degrees must be a whole number of grid steps");
  }
  return full_circle(static_cast<std::size_t>(rounded));
}

double BellGrid::angle(std::size_t index) const {
  return 2.0 * std::numbers::pi * static_cast<double>(index % divisions) /
         static_cast<double>(divisions);
}

namespace {

struct ChunkExtrema {
  double max_value = -INFINITY;
  std::size_t max_i = 0, max_j = 0, max_l = 0;
  double min_value = INFINITY;
  std::size_t min_i = 0, min_j = 0, min_l = 0;
};

void check_axis(const GridAxis& axis, std::size_t divisions, const char* name) {
  if (axis.end > divisions || axis.begin > axis.end) {
    std::ostringstream msg;
    msg << "grid axis " << name << " [" << axis.begin << ", " << axis.end
        << ") exceeds the circle of " << divisions << " steps";
    throw ConfigError(std::string("bell.grid.") + name, msg.str());
  }
}

}  // namespace

BellScanResult bell_scan(const BellGrid& grid, const BellScanOptions& options) {
  const std::size_t n = grid.divisions;
  if (n == 0) throw ConfigError("bell.grid", "grid has no divisions");
  check_axis(grid.d12, n, "d12");
  check_axis(grid.d12p, n, "d12p");
  check_axis(grid.d1p2, n, "d1p2");
  if (grid.size() == 0) throw ConfigError("bell.grid", "bell scan grid is empty");

  std::vector<double> table(2 * n);
  for (std::size_t k = 0; k < 2 * n; ++k) table[k] = std::cos(grid.angle(k));

  const auto& kern = options.simd ? kernels::ch74_kernels(*options.simd) : kernels::ch74_kernels();
  const std::size_t rows_i = grid.d12.size();
  const std::size_t row_len = grid.d1p2.size();
  const std::size_t per_i = grid.d12p.size() * row_len;

  BellScanResult result;
  result.evaluated = grid.size();
  result.simd = kern.level;
  if (options.retain_points) result.points.resize(grid.size());

  auto point_at = [&](std::size_t i, std::size_t j, std::size_t l, double value) {
    BellScanPoint p;
    p.d12 = grid.angle(i);
    p.d12p = grid.angle(j);
    p.d1p2 = grid.angle(l);
    p.d1p2p = grid.angle(l + j + n - i);
    p.result = make_ch74_result(value, -1.0, 0.0);
    return p;
  };

  std::vector<ChunkExtrema> chunk_results(rows_i);
  const std::size_t workers = options.workers ? options.workers : worker_count();
  parallel_chunks(rows_i, rows_i, workers, [&](std::size_t chunk, std::size_t b, std::size_t e) {
    ChunkExtrema ext;
    std::vector<double> row_values(options.retain_points ? row_len : 0);
    for (std::size_t ii = b; ii < e; ++ii) {
      const std::size_t i = grid.d12.begin + ii;
      for (std::size_t j = grid.d12p.begin; j < grid.d12p.end; ++j) {
        kernels::Ch74Row row{table, table[i] - table[j], (j + n - i) % n, grid.d1p2.begin,
                             grid.d1p2.end};
        const auto r = kern.row_extrema(row);
        if (r.max_value > ext.max_value) {
          ext.max_value = r.max_value;
          ext.max_i = i, ext.max_j = j, ext.max_l = r.max_index;
        }
        if (r.min_value < ext.min_value) {
          ext.min_value = r.min_value;
          ext.min_i = i, ext.min_j = j, ext.min_l = r.min_index;
        }
        if (options.retain_points) {
          kern.row(row, row_values);
          const std::size_t offset = ii * per_i + (j - grid.d12p.begin) * row_len;
          for (std::size_t k = 0; k < row_len; ++k) {
            result.points[offset + k] = point_at(i, j, grid.d1p2.begin + k, row_values[k]);
          }
        }
      }
    }
    chunk_results[chunk] = ext;
  });

  ChunkExtrema total;
  for (const auto& c : chunk_results) {
    if (c.max_value > total.max_value) {
      total.max_value = c.max_value;
      total.max_i = c.max_i, total.max_j = c.max_j, total.max_l = c.max_l;
    }
    if (c.min_value < total.min_value) {
      total.min_value = c.min_value;
      total.min_i = c.min_i, total.min_j = c.min_j, total.min_l = c.min_l;
    }
  }
  result.maximum = point_at(total.max_i, total.max_j, total.max_l, total.max_value);
  result.minimum = point_at(total.min_i, total.min_j, total.min_l, total.min_value);
  return result;
}

}  // namespace tpi
