#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "tpi/bell.hpp"
#include "tpi/correlations.hpp"
#include "tpi/geometry.hpp"
#include "tpi/rng.hpp"

namespace tpi {

/// Timing-window post-selection on the detection delay of a cycle.
enum class Selection { all, no_overlap_and_no_signaling, no_overlap_only, overlapping };

std::string_view to_string(Selection s);
Selection selection_from_string(std::string_view name);

enum class Sampler {
  /// sequential for equal decay constants, joint otherwise
  automatic,
  /// first click collapses the emitters, second click drawn from the conditional state
  sequential,
  /// rejection sampling from the closed-form two-photon density
  joint,
};

std::string_view to_string(Sampler s);
Sampler sampler_from_string(std::string_view name);

struct RunConfig {
  RunConfig(EmitterPair pair, DetectorSetting detector1, DetectorSetting detector2)
      : pair(std::move(pair)), detector1(detector1), detector2(detector2) {}

  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  EmitterPair pair;
  DetectorSetting detector1;
  DetectorSetting detector2;
  Selection selection = Selection::all;
  G2Mode mode = G2Mode::paper_literal;
  Sampler sampler = Sampler::automatic;
  /// Points of the phi2 - phi1 fringe scan, offset from the detectors' own
  /// phase difference. 0 or 1 runs the configured setting only.
  std::size_t fringe_points = 24;
  std::size_t workers = 0;  ///< 0 uses worker_count()

  /// Throws ConfigError on trials == 0 or a sequential sampler with unequal
  /// decay constants.
  void validate() const;
  Sampler resolved_sampler() const;
};

struct ClickEvent {
  std::uint64_t trial = 0;
  int detector = 1;
  double detection_time = 0.0;
  double emission_time = 0.0;
  double phase_setting = 0.0;
};

/// Parameters of a single measurement cycle.
struct CycleSetup {
  const EmitterPair* pair = nullptr;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double transit1 = 0.0;
  double transit2 = 0.0;
  Selection selection = Selection::all;
  G2Mode mode = G2Mode::paper_literal;
  Sampler sampler = Sampler::sequential;  ///< must be resolved
};

struct CycleOutcome {
  ClickEvent first;   ///< earlier detection
  ClickEvent second;  ///< later detection
  /// One photon per detector: the second click landed on the other detector.
  bool coincident = false;
  CausalityClass window = CausalityClass::overlapping;
  bool selected = false;  ///< detection delay passes the selection rule
  /// Joint sampler in paper_literal mode only: acceptance probability left [0, 1].
  bool clamped = false;

  bool accepted() const { return coincident && selected; }
};

/// One measurement cycle. Every draw comes from `rng`, so a cycle is a pure
/// function of the stream state and the setup.
CycleOutcome simulate_cycle(TrialRng& rng, const CycleSetup& setup);

struct FringePoint {
  double delta_phi = 0.0;       ///< phi2 - phi1
  std::uint64_t trials = 0;
  std::uint64_t selected = 0;   ///< cycles passing the timing window
  std::uint64_t accepted = 0;   ///< selected and coincident
  double rate = 0.0;            ///< accepted / selected
  double standard_error = 0.0;  ///< binomial
};

struct EstimateReport {
  std::uint64_t trials = 0;
  std::uint64_t accepted_trials = 0;
  /// Normalized coincidence rate g2 / exp(-2 gamma (t1~ + t2~)) at the first
  /// scan point; converges to (1 + cos(phi2 - phi1)) / 2.
  double g2_estimate = 0.0;
  double visibility_estimate = 0.0;
  double standard_error = 0.0;
  std::optional<double> ch74_estimate;
  bool zero_acceptance = false;
  Sampler sampler = Sampler::sequential;
  std::vector<FringePoint> fringe;
  /// Coincident cycles by causality class, before the selection rule.
  std::array<std::uint64_t, 3> class_counts{};
  std::uint64_t coincident = 0;
  std::uint64_t clamped = 0;
};

using ClickSink = std::function<void(std::uint64_t trial, const CycleOutcome&)>;

/// Fringe scan over config.fringe_points phase offsets with trials split
/// evenly between points. Bit-reproducible for a fixed seed regardless of
/// worker count. A click sink forces serial execution in trial order.
EstimateReport run(const RunConfig& config, const ClickSink& sink = {});

/// CH74 from four sub-runs (1,2), (1,2'), (1',2), (1',2') that share the timing
/// cut, each with trials / 4 cycles. The detector phases in `config` are
/// replaced by those in `settings`.
EstimateReport ch74_empirical(const RunConfig& config, const BellSettings& settings);

}  // namespace tpi
