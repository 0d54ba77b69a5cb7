#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tpi/bell.hpp"
#include "tpi/correlations.hpp"
#include "tpi/geometry.hpp"
#include "tpi/montecarlo.hpp"

namespace tpi {

/// Unit of the decay constants given in geometry.gamma*.
enum class GammaUnit {
  /// Amplitude decay constant in 1/s; populations decay as exp(-2 gamma t).
  per_second,
  /// Natural linewidth in Hz: lifetime 1/(2 pi gamma), so the amplitude decay
  /// constant is pi * gamma.
  linewidth_hz,
  /// As linewidth_hz, in MHz.
  linewidth_mhz,
};

std::string_view to_string(GammaUnit unit);
GammaUnit gamma_unit_from_string(std::string_view name);
/// Amplitude decay constant in 1/s.
double to_amplitude_decay(double value, GammaUnit unit);

struct TimingConfig {
  double t1 = 0.0;  ///< detection time at detector 1, s
  double t2 = 0.0;  ///< detection time at detector 2, s
  std::optional<double> delay;  ///< requested t2 - t1 for timing-check
};

struct ScanConfig {
  std::size_t points = 0;
  /// Detection-time pairs; defaults to the timing block.
  std::vector<std::pair<double, double>> times;
};

struct BellConfig {
  BellSettings settings;
  double grid_step_deg = 0.0;
  std::optional<RawTimings> raw_times;
};

struct MonteCarloConfig {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  Selection selection = Selection::all;
  Sampler sampler = Sampler::automatic;
  std::size_t fringe_points = 0;
};

/// A validated run configuration with all defaults filled in.
struct AppConfig {
  EmitterPair pair;
  std::array<DetectorSetting, 2> detectors;
  G2Mode mode = G2Mode::paper_literal;
  TimingConfig timing;
  ScanConfig scan;
  BellConfig bell;
  MonteCarloConfig montecarlo;

  /// Larger of the two detector transit times.
  double shared_transit() const;
  RunConfig run_config() const;
};

/// Parses and validates; throws ConfigError naming the offending field.
AppConfig parse_config(const nlohmann::json& doc);
AppConfig load_config(const std::filesystem::path& path);

/// Canonical form: explicit positions, gamma in 1/s, every default written out.
nlohmann::json to_json(const AppConfig& config);

}  // namespace tpi
