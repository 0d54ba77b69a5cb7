#include "tpi/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "tpi/errors.hpp"
#include "tpi/parallel.hpp"

namespace tpi {

std::string_view to_string(Selection s) {
  switch (s) {
    case Selection::all:
      return "all";
    case Selection::no_overlap_and_no_signaling:
      return "no_overlap_and_no_signaling";
    case Selection::no_overlap_only:
      return "no_overlap_only";
    case Selection::overlapping:
      return "overlapping";
  }
  return "unknown";
}

Selection selection_from_string(std::string_view name) {
  for (Selection s : {Selection::all, Selection::no_overlap_and_no_signaling,
                      Selection::no_overlap_only, Selection::overlapping}) {
    if (name == to_string(s)) return s;
  }
  throw ConfigError("montecarlo.selection", "unknown selection '" + std::string(name) + "'");
}

std::string_view to_string(Sampler s) {
  switch (s) {
    case Sampler::automatic:
      return "auto";
    case Sampler::sequential:
      return "sequential";
    case Sampler::joint:
      return "joint";
  }
  return "unknown";
}

Sampler sampler_from_string(std::string_view name) {
  for (Sampler s : {Sampler::automatic, Sampler::sequential, Sampler::joint}) {
    if (name == to_string(s)) return s;
  }
  throw ConfigError("montecarlo.sampler", "unknown sampler '" + std::string(name) + "'");
}

void RunConfig::validate() const {
  if (trials < 1) throw ConfigError("montecarlo.trials", "trials must be >= 1");
  if (sampler == Sampler::sequential && !pair.equal_decay()) {
    throw ConfigError("montecarlo.sampler",
                      "the sequential sampler assumes equal decay constants; use joint");
  }
}

Sampler RunConfig::resolved_sampler() const {
  if (sampler != Sampler::automatic) return sampler;
  return pair.equal_decay() ? Sampler::sequential : Sampler::joint;
}

namespace {

std::size_t class_index(CausalityClass c) { return static_cast<std::size_t>(c); }

bool passes(Selection selection, CausalityClass window) {
  switch (selection) {
    case Selection::all:
      return true;
    case Selection::no_overlap_and_no_signaling:
      return window == CausalityClass::no_overlap_and_no_signaling;
    case Selection::no_overlap_only:
      return window == CausalityClass::no_overlap_only;
    case Selection::overlapping:
      return window == CausalityClass::overlapping;
  }
  return false;
}

ClickEvent click(int detector, double emission, const CycleSetup& setup) {
  ClickEvent e;
  e.detector = detector;
  e.emission_time = emission;
  e.detection_time = emission + (detector == 1 ? setup.transit1 : setup.transit2);
  e.phase_setting = detector == 1 ? setup.phi1 : setup.phi2;
  return e;
}

// Orders the two clicks by detection time and applies the timing window.
void finish(CycleOutcome& out, ClickEvent a, ClickEvent b, const CycleSetup& setup) {
  if (b.detection_time < a.detection_time) std::swap(a, b);
  out.first = a;
  out.second = b;
  const double late_transit = b.detector == 1 ? setup.transit1 : setup.transit2;
  out.window = causality_window_check(a.detection_time, b.detection_time, late_transit);
  out.selected = passes(setup.selection, out.window);
}

CycleOutcome sequential_cycle(TrialRng& rng, const CycleSetup& setup) {
  const EmitterPair& pair = *setup.pair;
  const double tau_a = rng.exponential(2.0 * pair.gamma_a());
  const double tau_b = rng.exponential(2.0 * pair.gamma_b());
  const double early = std::min(tau_a, tau_b);
  const double late = std::max(tau_a, tau_b);
  const int first_detector = rng.coin() ? 2 : 1;
  const int other_detector = 3 - first_detector;

  const double phi_first = first_detector == 1 ? setup.phi1 : setup.phi2;
  const double phi_other = first_detector == 1 ? setup.phi2 : setup.phi1;
  const ConditionalState memory = conditional_state(phi_first);
  const double p = second_detection_prob(memory, phi_other);

  CycleOutcome out;
  out.coincident = rng.uniform() < p;
  finish(out, click(first_detector, early, setup), click(other_detector, late, setup), setup);
  return out;
}

CycleOutcome joint_cycle(TrialRng& rng, const CycleSetup& setup) {
  const EmitterPair& pair = *setup.pair;
  const double ga = pair.gamma_a();
  const double gb = pair.gamma_b();
  const double c = std::cos(setup.phi2 - setup.phi1);

  CycleOutcome out;
  double t1 = 0.0;
  double t2 = 0.0;
  double accept = 0.0;
  if (setup.mode == G2Mode::paper_literal) {
    // Proposal exp(-2(ga t1 + gb t2)); target adds the cross term.
    t1 = rng.exponential(2.0 * ga);
    t2 = rng.exponential(2.0 * gb);
    accept = 0.5 * (1.0 + std::exp((ga - gb) * (t1 - t2)) * c);
    if (accept < 0.0 || accept > 1.0) {
      out.clamped = true;
      accept = std::clamp(accept, 0.0, 1.0);
    }
  } else {
    // Equal-weight mixture of both envelopes as the proposal.
    const bool swapped = rng.coin();
    t1 = rng.exponential(2.0 * (swapped ? gb : ga));
    t2 = rng.exponential(2.0 * (swapped ? ga : gb));
    accept = 0.5 * (1.0 + c / std::cosh((ga - gb) * (t1 - t2)));
  }
  out.coincident = rng.uniform() < accept;
  finish(out, click(1, t1, setup), click(2, t2, setup), setup);
  return out;
}

struct PointCounts {
  std::uint64_t trials = 0;
  std::uint64_t selected = 0;
  std::uint64_t accepted = 0;
  std::uint64_t coincident = 0;
  std::uint64_t clamped = 0;
  std::array<std::uint64_t, 3> classes{};

  void add(const PointCounts& o) {
    trials += o.trials;
    selected += o.selected;
    accepted += o.accepted;
    coincident += o.coincident;
    clamped += o.clamped;
    for (std::size_t k = 0; k < 3; ++k) classes[k] += o.classes[k];
  }
};

struct PhasePair {
  double phi1;
  double phi2;
};

// Trials [k T / K, (k + 1) T / K) use phases[k].
std::vector<PointCounts> simulate_points(const RunConfig& config, const std::vector<PhasePair>& phases,
                                         const ClickSink& sink) {
  const std::uint64_t total = config.trials;
  const std::size_t points = phases.size();
  auto point_begin = [&](std::size_t k) { return k * total / points; };

  CycleSetup base;
  base.pair = &config.pair;
  base.transit1 = config.detector1.transit_time;
  base.transit2 = config.detector2.transit_time;
  base.selection = config.selection;
  base.mode = config.mode;
  base.sampler = config.resolved_sampler();

  auto simulate_range = [&](std::uint64_t begin, std::uint64_t end, std::vector<PointCounts>& acc) {
    for (std::size_t k = 0; k < points; ++k) {
      const std::uint64_t b = std::max<std::uint64_t>(begin, point_begin(k));
      const std::uint64_t e = std::min<std::uint64_t>(end, point_begin(k + 1));
      if (b >= e) continue;
      CycleSetup setup = base;
      setup.phi1 = phases[k].phi1;
      setup.phi2 = phases[k].phi2;
      PointCounts& counts = acc[k];
      for (std::uint64_t n = b; n < e; ++n) {
        TrialRng rng(config.seed, n);
        CycleOutcome out = simulate_cycle(rng, setup);
        out.first.trial = out.second.trial = n;
        ++counts.trials;
        counts.selected += out.selected;
        counts.accepted += out.accepted();
        counts.clamped += out.clamped;
        if (out.coincident) {
          ++counts.coincident;
          ++counts.classes[class_index(out.window)];
        }
        if (sink) sink(n, out);
      }
    }
  };

  std::vector<PointCounts> totals(points);
  if (sink) {
    simulate_range(0, total, totals);
    return totals;
  }

  const std::size_t workers = config.workers ? config.workers : worker_count();
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::uint64_t>(total, 64 * workers));
  std::vector<std::vector<PointCounts>> per_chunk(chunks, std::vector<PointCounts>(points));
  parallel_chunks(total, chunks, workers, [&](std::size_t chunk, std::size_t b, std::size_t e) {
    simulate_range(b, e, per_chunk[chunk]);
  });
  for (const auto& chunk : per_chunk) {
    for (std::size_t k = 0; k < points; ++k) totals[k].add(chunk[k]);
  }
  return totals;
}

FringePoint to_fringe(const PointCounts& c, double delta_phi) {
  FringePoint f;
  f.delta_phi = delta_phi;
  f.trials = c.trials;
  f.selected = c.selected;
  f.accepted = c.accepted;
  if (c.selected > 0) {
    const double n = static_cast<double>(c.selected);
    f.rate = static_cast<double>(c.accepted) / n;
    f.standard_error = std::sqrt(f.rate * (1.0 - f.rate) / n);
  } else {
    f.rate = std::numeric_limits<double>::quiet_NaN();
    f.standard_error = std::numeric_limits<double>::quiet_NaN();
  }
  return f;
}

EstimateReport summarize(const RunConfig& config, const std::vector<PointCounts>& counts,
                         const std::vector<double>& delta_phis) {
  EstimateReport report;
  report.trials = config.trials;
  report.sampler = config.resolved_sampler();
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const auto& c = counts[k];
    report.accepted_trials += c.accepted;
    report.coincident += c.coincident;
    report.clamped += c.clamped;
    for (std::size_t j = 0; j < 3; ++j) report.class_counts[j] += c.classes[j];
    report.fringe.push_back(to_fringe(c, delta_phis[k]));
  }
  return report;
}

void mark_zero_acceptance(EstimateReport& report) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  report.zero_acceptance = true;
  report.g2_estimate = nan;
  report.visibility_estimate = nan;
  report.standard_error = nan;
  if (report.ch74_estimate) report.ch74_estimate = nan;
}

}  // namespace

CycleOutcome simulate_cycle(TrialRng& rng, const CycleSetup& setup) {
  if (setup.pair == nullptr) throw ConfigError("cycle setup has no emitter pair");
  switch (setup.sampler) {
    case Sampler::sequential:
      return sequential_cycle(rng, setup);
    case Sampler::joint:
      return joint_cycle(rng, setup);
    case Sampler::automatic:
      break;
  }
  throw ConfigError("montecarlo.sampler", "cycle setup needs a resolved sampler");
}

EstimateReport run(const RunConfig& config, const ClickSink& sink) {
  config.validate();
  const std::size_t points = std::max<std::size_t>(1, config.fringe_points);
  if (points > config.trials) {
    throw ConfigError("montecarlo.fringe_points", "more fringe points than trials");
  }
  const double phi1 = config.detector1.phase_phi;
  const double base_delta = config.detector2.phase_phi - phi1;

  std::vector<PhasePair> phases;
  std::vector<double> deltas;
  for (std::size_t k = 0; k < points; ++k) {
    const double delta =
        base_delta + 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(points);
    phases.push_back({phi1, phi1 + delta});
    deltas.push_back(delta);
  }

  EstimateReport report = summarize(config, simulate_points(config, phases, sink), deltas);
  if (report.accepted_trials == 0) {
    mark_zero_acceptance(report);
    return report;
  }
  report.g2_estimate = report.fringe.front().rate;
  report.standard_error = report.fringe.front().standard_error;
  if (points >= 2) {
    double hi = -INFINITY;
    double lo = INFINITY;
    for (const auto& f : report.fringe) {
      if (std::isnan(f.rate)) continue;
      hi = std::max(hi, f.rate);
      lo = std::min(lo, f.rate);
    }
    report.visibility_estimate = hi + lo > 0.0 ? (hi - lo) / (hi + lo)
                                               : std::numeric_limits<double>::quiet_NaN();
  } else {
    report.visibility_estimate = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

EstimateReport ch74_empirical(const RunConfig& config, const BellSettings& settings) {
  config.validate();
  settings.validate();
  if (config.trials < 4) throw ConfigError("montecarlo.trials", "CH74 needs at least 4 trials");

  const std::vector<PhasePair> phases = {{settings.phi1, settings.phi2},
                                         {settings.phi1, settings.phi2p},
                                         {settings.phi1p, settings.phi2},
                                         {settings.phi1p, settings.phi2p}};
  std::vector<double> deltas;
  for (const auto& p : phases) deltas.push_back(p.phi2 - p.phi1);

  EstimateReport report = summarize(config, simulate_points(config, phases, {}), deltas);
  const auto& f = report.fringe;
  report.ch74_estimate = f[0].rate - f[1].rate + f[2].rate + f[3].rate - 2.0;
  double variance = 0.0;
  for (const auto& p : f) variance += p.standard_error * p.standard_error;
  report.standard_error = std::sqrt(variance);
  report.g2_estimate = f[0].rate;
  report.visibility_estimate = std::numeric_limits<double>::quiet_NaN();
  if (report.accepted_trials == 0) mark_zero_acceptance(report);
  return report;
}

}  // namespace tpi
