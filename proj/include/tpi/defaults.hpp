#pragma once

// Every run-time default in one place. Each value can be overridden in the
// JSON run config (field noted alongside).

#include <cstddef>
#include <cstdint>

namespace tpi::defaults {

inline constexpr double min_distance_ratio = 100.0;   // geometry.far_field.min_distance_ratio
inline constexpr double min_separation_ratio = 10.0;  // geometry.far_field.min_separation_ratio
inline constexpr std::size_t scan_points = 24;        // scan.points
inline constexpr double bell_grid_step_deg = 5.0;     // bell.grid.step_deg
inline constexpr std::uint64_t mc_trials = 100'000;   // montecarlo.trials
inline constexpr std::uint64_t mc_seed = 0;           // montecarlo.seed
inline constexpr std::size_t mc_fringe_points = 24;   // montecarlo.fringe_points
/// Bell scans at or below this many points may be written out point by point.
inline constexpr std::size_t bell_scan_csv_limit = 50'000'000;

}  // namespace tpi::defaults
