// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tpi/bell.hpp"
#include "tpi/cli.hpp"
#include "tpi/config.hpp"
#include "tpi/correlations.hpp"
#include "tpi/dynamics.hpp"
#include "tpi/geometry.hpp"
#include "tpi/montecarlo.hpp"

using namespace tpi;
using std::numbers::pi;

namespace {

// Tolerances and budgets.
constexpr double visibility_tol = 1e-12;
constexpr double ch74_tol = 1e-9;
constexpr double scan_gap_tol = 1e-3;
constexpr double scan_overshoot_tol = 1e-9;
constexpr double oracle_tol = 1e-8;
constexpr double amplitude_tol = 1e-12;
constexpr double mc_visibility_tol = 0.01;
constexpr double mc_fringe_sigmas = 4.0;
constexpr double ch74_sigmas = 3.0;
constexpr double rounded_tol_ns = 0.5;
constexpr double lifetime_rounded_ns = 8.0;
constexpr double transit_rounded_ns = 3.0;

constexpr double budget_visibility_s = 1.0;
constexpr double budget_ch74_s = 1.0;
constexpr double budget_scan_s = 60.0;
constexpr double budget_oracle_s = 30.0;
constexpr double budget_mc_s = 120.0;
constexpr double budget_empirical_s = 300.0;

constexpr std::uint64_t mc_trials = 1'000'000;
constexpr std::size_t mc_fringe = 24;
constexpr std::uint64_t empirical_trials = 4'000'000;
constexpr std::uint64_t seed = 20240601;

const double tsirelson = std::sqrt(2.0) - 1.0;
constexpr double gamma16 = 1.0 / 16e-9;
constexpr double wavelength = 397e-9;
constexpr double separation = 1e-5;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;  ///< 0 means no runtime bound
  std::function<Outcome()> body;
};

EmitterPair equal_pair() { return EmitterPair::on_x_axis(separation, wavelength, gamma16, gamma16); }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome visibility_unity() {
  std::mt19937_64 gen(seed + 1);
  const EmitterPair pair = equal_pair();
  const double t_r = make_detector_at(pair, 1.0, 0.0).transit_time;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int beyond_transit = 0;
  for (int n = 0; n < 100; ++n) {
    const double t1 = t_r + 40e-9 * u(gen);
    // Every other pair has t2 - t1 beyond the transit time.
    const double t2 = n % 2 == 0 ? t1 + t_r * (1.0 + 5.0 * u(gen)) : t_r + 40e-9 * u(gen);
    beyond_transit += (t2 - t1 > t_r);
    worst = std::max(worst, std::abs(visibility(pair, t1, t2) - 1.0));
  }
  return {worst <= visibility_tol && beyond_transit >= 50,
          fmt("max |V - 1| = %.3g over 100 pairs, %.0f with t2 - t1 > t_R", worst, beyond_transit)};
}

Outcome ch74_bell_angles() {
  std::mt19937_64 gen(seed + 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double t_r = make_detector_at(equal_pair(), 1.0, 0.0).transit_time;
  double worst = 0.0;
  bool all_violated = true;
  int window = 0;
  for (int n = 0; n < 50; ++n) {
    const double t10 = t_r + 30e-9 * u(gen);
    double gap = 0.0;
    switch (n % 3) {
      case 0: gap = t_r * (1.0 + u(gen)); break;         // no overlap, no signaling
      case 1: gap = t_r * (2.0 + 5.0 * u(gen)); break;   // no overlap
      default: gap = t_r * u(gen); break;                // overlapping
    }
    const auto s = bell_angle_settings(gamma16, t_r, t10, t10 + gap);
    const auto r = ch74_functional(s);
    window += causality_window_check(s.t10, s.t20, t_r) == CausalityClass::no_overlap_and_no_signaling;
    worst = std::max(worst, std::abs(r.value - tsirelson));
    all_violated = all_violated && r.violated;
  }
  return {worst <= ch74_tol && all_violated && window > 0,
          fmt("max |CH - (sqrt2 - 1)| = %.3g, %.0f timings in the no-overlap window", worst, window)};
}

Outcome scan_maximum() {
  const auto r = bell_scan(BellGrid::from_step_degrees(1.0));
  const double v = r.maximum.result.value;
  const double gap = tsirelson - v;
  return {gap <= scan_gap_tol && v - tsirelson <= scan_overshoot_tol,
          fmt("max = %.12f over %.0f points (sqrt2 - 1 - max = %.3g)", v,
              static_cast<double>(r.evaluated), gap) +
              " simd=" + std::string(kernels::to_string(r.simd))};
}

Outcome dynamics_oracle() {
  std::mt19937_64 gen(seed + 4);
  std::uniform_real_distribution<double> g(0.1, 10.0), w(0.0, 100.0), t(0.0, 5.0), p(0.0, 1.0);
  double worst = 0.0;
  for (int n = 0; n < 200; ++n) {
    CorrelatorQuery q;
    q.gamma = g(gen);
    q.omega = w(gen);
    const double a = t(gen), b = t(gen);
    q.t_i = std::min(a, b);
    q.t_j = std::max(a, b);
    q.initial_excited_population = n % 4 == 0 ? 1.0 : p(gen);
    worst = std::max(worst, std::abs(regression_oracle(q) - two_time_correlator(q)));
  }
  return {worst <= oracle_tol, fmt("max |oracle - closed form| = %.3g over 200 queries", worst)};
}

Outcome amplitude_equivalence() {
  std::mt19937_64 gen(seed + 5);
  std::uniform_real_distribution<double> gam(1e6, 1e9), phase(-4 * pi, 4 * pi), e(0.0, 50e-9);
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const double gamma = gam(gen);
    const auto pair = EmitterPair::on_x_axis(separation, wavelength, gamma, gamma);
    const auto timing = TimingRecord::from_emission(e(gen), e(gen));
    const double phi1 = phase(gen), phi2 = phase(gen);
    for (G2Mode mode : {G2Mode::paper_literal, G2Mode::amplitude_oracle}) {
      worst = std::max(worst, std::abs(g2_amplitude_oracle(pair, phi1, phi2, timing) -
                                       g2_analytic(pair, phi1, phi2, timing, mode)));
    }
  }
  return {worst <= amplitude_tol, fmt("max |oracle - analytic| = %.3g over 1000 inputs", worst)};
}

RunConfig mc_config(std::uint64_t trials) {
  const auto pair = equal_pair();
  RunConfig cfg(pair, make_detector_at(pair, 1.0, 0.0), make_detector_at(pair, 1.0, 0.0));
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.selection = Selection::no_overlap_and_no_signaling;
  return cfg;
}

Outcome monte_carlo_fringe() {
  RunConfig cfg = mc_config(mc_trials);
  cfg.fringe_points = mc_fringe;
  const auto a = run(cfg);
  cfg.workers = 1;
  const auto b = run(cfg);

  bool reproducible = a.accepted_trials == b.accepted_trials && a.class_counts == b.class_counts;
  double worst_sigma = 0.0;
  bool fringe_ok = a.fringe.size() == mc_fringe;
  for (std::size_t k = 0; k < a.fringe.size(); ++k) {
    const auto& f = a.fringe[k];
    reproducible = reproducible && f.accepted == b.fringe[k].accepted && f.selected == b.fringe[k].selected;
    const double bound = mc_fringe_sigmas / std::sqrt(static_cast<double>(f.selected));
    const double dev = std::abs(f.rate - 0.5 * (1.0 + std::cos(f.delta_phi)));
    fringe_ok = fringe_ok && dev <= bound;
    worst_sigma = std::max(worst_sigma, dev / bound * mc_fringe_sigmas);
  }
  const double vis = a.visibility_estimate;
  const bool vis_ok = std::abs(vis - 1.0) <= mc_visibility_tol;
  return {vis_ok && fringe_ok && reproducible && !a.zero_acceptance,
          fmt("V = %.6f, worst fringe deviation %.2f / sqrt(N), ", vis, worst_sigma) +
              (reproducible ? "bit-reproducible" : "NOT reproducible")};
}

Outcome empirical_ch74() {
  RunConfig cfg = mc_config(empirical_trials);
  const double t_r = cfg.detector1.transit_time;
  const auto s = bell_angle_settings(gamma16, t_r, t_r, t_r);
  const auto r = ch74_empirical(cfg, s);
  const double est = r.ch74_estimate.value_or(NAN);
  const double z = std::abs(est - tsirelson) / r.standard_error;
  return {z <= ch74_sigmas, fmt("CH = %.5f +- %.5f, %.2f standard errors from sqrt2 - 1", est,
                                r.standard_error, z)};
}

Outcome lifetime_and_transit() {
  std::ostringstream out, err;
  const int code = cli::run({"timing-check", "--config", TPI_CA_CONFIG}, out, err);
  if (code != 0) return {false, "timing-check exited with " + std::to_string(code) + ": " + err.str()};
  const auto j = nlohmann::json::parse(out.str());
  const double lifetime_ns = j["lifetime_a_s"].get<double>() * 1e9;
  const double transit_ns = j["transit_s"].get<double>() * 1e9;
  const bool ok = std::abs(lifetime_ns - lifetime_rounded_ns) <= rounded_tol_ns &&
                  std::abs(transit_ns - transit_rounded_ns) <= rounded_tol_ns;
  return {ok, fmt("lifetime %.4f ns, t_R %.4f ns", lifetime_ns, transit_ns)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "visibility unity", budget_visibility_s, visibility_unity},
      {2, "CH74 violation at the Bell angles", budget_ch74_s, ch74_bell_angles},
      {3, "1 degree scan maximum", budget_scan_s, scan_maximum},
      {4, "dynamics regression oracle", budget_oracle_s, dynamics_oracle},
      {5, "amplitude oracle equivalence", 0.0, amplitude_equivalence},
      {6, "Monte Carlo fringe", budget_mc_s, monte_carlo_fringe},
      {7, "empirical CH74", budget_empirical_s, empirical_ch74},
      {8, "lifetime and transit arithmetic", 0.0, lifetime_and_transit},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = c.budget_s <= 0.0 || elapsed <= c.budget_s;
    const bool pass = o.pass && in_budget;
    failures += !pass;
    std::printf("%s [%d] %s: %s (%.2f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                elapsed, in_budget ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
