#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "tpi/kernels/ch74.hpp"

namespace tpi {

/// Detector phases for the four CH74 settings and the pinned detection times.
struct BellSettings {
  double phi1 = 0.0;
  double phi1p = 0.0;
  double phi2 = 0.0;
  double phi2p = 0.0;
  double t10 = 0.0;  ///< detection time shared by settings 1 and 1'
  double t20 = 0.0;  ///< detection time shared by settings 2 and 2'
  double gamma = 1.0;
  double transit = 0.0;

  /// Throws ConfigError unless t10 <= t20, both emission times are >= 0
  /// and gamma > 0.
  void validate() const;
};

/// Phases realizing the relative-phase magnitudes (|phi1 - phi2|,
/// |phi1 - phi2'|, |phi1' - phi2|, |phi1' - phi2'|) = (pi/4, 3pi/4, pi/4, pi/4).
/// phi2 = 0, phi1 = pi/4, phi2' = -pi/2, phi1' = -pi/4.
BellSettings bell_angle_settings(double gamma, double transit, double t10, double t20);

struct Ch74Result {
  double value = 0.0;
  double lower_bound = -1.0;
  double upper_bound = 0.0;
  bool violated = false;
  /// Distance outside [lower, upper]; negative when inside.
  double margin = 0.0;
};

/// Slack applied to both bounds before declaring a violation.
inline constexpr double ch74_violation_tolerance = 1e-12;

Ch74Result make_ch74_result(double value, double lower_bound, double upper_bound);

/// Time-factor-free CH74 expression
///   0.5 (cos d12 - cos d12' + cos d1'2 + cos d1'2') - 1   in bounds [-1, 0].
Ch74Result ch74_cancelled(double d12, double d12p, double d1p2, double d1p2p);

/// CH74 for settings sharing pinned detection times; the common factor
/// exp(-2 gamma (t10~ + t20~)) has been divided out.
Ch74Result ch74_functional(const BellSettings& s);

/// Individual detection times of settings 1, 1', 2 and 2'.
struct RawTimings {
  double t1 = 0.0;
  double t1p = 0.0;
  double t2 = 0.0;
  double t2p = 0.0;
};

/// CH74 with the time factors kept:
///   g(1,2) - g(1,2') + g(1',2) + g(1',2') - e^{-2g(t1'~ + t20~)} - e^{-2g(t10~ + t2~)}
/// in bounds [-e^{-2g(t10~ + t20~)}, 0], where g(i,j) is the equal-decay g2.
Ch74Result ch74_raw(const BellSettings& s, const RawTimings& times);

enum class CausalityClass {
  /// transit < t2 - t1 < 2 transit
  no_overlap_and_no_signaling,
  /// t2 - t1 >= 2 transit
  no_overlap_only,
  /// t2 - t1 <= transit
  overlapping,
};

std::string_view to_string(CausalityClass c);

/// Classifies the detection delay. Throws DomainError if t2 < t1.
CausalityClass causality_window_check(double t1, double t2, double transit);

/// Half-open index range on a uniform circle grid.
struct GridAxis {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end > begin ? end - begin : 0; }
};

/// Phase-difference grid. Angles are 2 pi k / divisions for the independent
/// differences d12, d12' and d1'2; d1'2' = d1'2 + d12' - d12.
struct BellGrid {
  std::size_t divisions = 360;
  GridAxis d12;
  GridAxis d12p;
  GridAxis d1p2;

  static BellGrid full_circle(std::size_t divisions);
  /// Full circle with the given step in degrees; 360 / step must be an integer.
  static BellGrid from_step_degrees(double step_degrees);

  std::size_t size() const { return d12.size() * d12p.size() * d1p2.size(); }
  double angle(std::size_t index) const;
};

struct BellScanPoint {
  double d12 = 0.0;
  double d12p = 0.0;
  double d1p2 = 0.0;
  double d1p2p = 0.0;
  Ch74Result result;
};

struct BellScanOptions {
  /// Keep every grid point (memory grows with the grid).
  bool retain_points = false;
  std::optional<kernels::SimdLevel> simd;
  std::size_t workers = 0;  ///< 0 uses worker_count()
};

struct BellScanResult {
  std::size_t evaluated = 0;
  BellScanPoint maximum;
  BellScanPoint minimum;
  kernels::SimdLevel simd = kernels::SimdLevel::scalar;
  std::vector<BellScanPoint> points;  ///< d12-major order, when retained
};

/// Evaluates the cancelled CH74 expression on every grid point. Throws
/// ConfigError for an empty grid or out-of-range axes.
BellScanResult bell_scan(const BellGrid& grid, const BellScanOptions& options = {});

}  // namespace tpi
