#include "tpi/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tpi/errors.hpp"

namespace tpi {

namespace {

void check_emission(const TimingRecord& timing) {
  if (!(timing.emission1() >= 0.0) || !(timing.emission2() >= 0.0)) {
    throw DomainError("emission times must be >= 0 (detection precedes any possible emission)");
  }
}

}  // namespace

std::string_view to_string(G2Mode mode) {
  switch (mode) {
    case G2Mode::paper_literal:
      return "paper_literal";
    case G2Mode::amplitude_oracle:
      return "amplitude_oracle";
  }
  return "unknown";
}

G2Mode g2_mode_from_string(std::string_view name) {
  if (name == "paper_literal") return G2Mode::paper_literal;
  if (name == "amplitude_oracle") return G2Mode::amplitude_oracle;
  throw ConfigError("mode", "unknown g2 mode '" + std::string(name) +
                                "' (expected paper_literal or amplitude_oracle)");
}

TimingRecord TimingRecord::make(double t1, double t2, double transit1, double transit2) {
  TimingRecord r{t1, t2, transit1, transit2};
  check_emission(r);
  return r;
}

TimingRecord TimingRecord::from_emission(double emission1, double emission2) {
  return make(emission1, emission2, 0.0, 0.0);
}

double g2_unnormalized(const EmitterPair& pair, double phi1, double phi2, const TimingRecord& timing,
                       FieldNormalization norm) {
  check_emission(timing);
  const double ga = pair.gamma_a();
  const double gb = pair.gamma_b();
  const double s1 = timing.emission1();
  const double s2 = timing.emission2();
  const double e4 = 0.5 * norm.g2_norm();
  return e4 * (std::exp(-2.0 * (ga * s1 + gb * s2)) +
               std::exp(-(ga + gb) * (s1 + s2)) * std::cos(phi2 - phi1));
}

double g2_analytic(const EmitterPair& pair, double phi1, double phi2, const TimingRecord& timing,
                   G2Mode mode) {
  check_emission(timing);
  const double s1 = timing.emission1();
  const double s2 = timing.emission2();
  const double c = std::cos(phi2 - phi1);
  if (pair.equal_decay()) {
    return 0.5 * std::exp(-2.0 * pair.gamma_a() * (s1 + s2)) * (1.0 + c);
  }
  const double ga = pair.gamma_a();
  const double gb = pair.gamma_b();
  const double cross = std::exp(-(ga + gb) * (s1 + s2));
  if (mode == G2Mode::paper_literal) {
    return 0.5 * (std::exp(-2.0 * (ga * s1 + gb * s2)) + cross * c);
  }
  return 0.25 * (std::exp(-2.0 * (ga * s1 + gb * s2)) + std::exp(-2.0 * (gb * s1 + ga * s2)) +
                 2.0 * cross * c);
}

double visibility(const EmitterPair& pair, double t1, double t2, G2Mode mode) {
  if (!(t1 >= 0.0) || !(t2 >= 0.0)) {
    throw DomainError("visibility needs non-negative detection times");
  }
  // Ratio of the interference amplitude to the non-interfering background.
  const double x = (pair.gamma_a() - pair.gamma_b()) * (t1 - t2);
  if (mode == G2Mode::paper_literal) return std::exp(x);
  return 1.0 / std::cosh(x);
}

namespace {

double two_path_sum(const EmitterPair& pair, const TimingRecord& timing, double path_a1_b2,
                    double path_b1_a2) {
  check_emission(timing);
  const double s1 = timing.emission1();
  const double s2 = timing.emission2();
  const std::complex<double> a1b2 =
      std::exp(-pair.gamma_a() * s1 - pair.gamma_b() * s2) * std::polar(1.0, path_a1_b2);
  const std::complex<double> b1a2 =
      std::exp(-pair.gamma_b() * s1 - pair.gamma_a() * s2) * std::polar(1.0, path_b1_a2);
  return 0.25 * std::norm(a1b2 + b1a2);
}

}  // namespace

double g2_amplitude_oracle(const EmitterPair& pair, double phi1, double phi2,
                           const TimingRecord& timing) {
  return two_path_sum(pair, timing, 0.0 + phi2, phi1 + 0.0);
}

double g2_amplitude_oracle(const EmitterPair& pair, const DetectorSetting& detector1,
                           const DetectorSetting& detector2, const TimingRecord& timing) {
  const double k = pair.wavenumber();
  auto phase = [&](const DetectorSetting& d, const Vec3& emitter) {
    return -k * d.unit_direction.dot(emitter);
  };
  const double a1 = phase(detector1, pair.position_a());
  const double b1 = phase(detector1, pair.position_b());
  const double a2 = phase(detector2, pair.position_a());
  const double b2 = phase(detector2, pair.position_b());
  return two_path_sum(pair, timing, a1 + b2, b1 + a2);
}

ConditionalState conditional_state(double phi1) {
  const double h = 1.0 / std::sqrt(2.0);
  return {h, std::polar(h, phi1)};
}

double second_detection_prob(const ConditionalState& state, double phi2) {
  // |ge> leaves emitter B excited (path phase phi2), |eg> leaves A (phase 0).
  const std::complex<double> amplitude = state.amplitude_ge * std::polar(1.0, phi2) +
                                         state.amplitude_eg;
  return std::clamp(0.5 * std::norm(amplitude), 0.0, 1.0);
}

}  // namespace tpi
