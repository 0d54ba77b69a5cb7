#pragma once

#include <complex>
#include <string_view>

#include "tpi/geometry.hpp"

namespace tpi {

/// How unequal decay constants enter the two-photon correlation.
enum class G2Mode {
  /// Single non-interfering envelope exp(-2(gamma_a t1 + gamma_b t2)).
  paper_literal,
  /// Both envelopes of the two-path amplitude sum.
  amplitude_oracle,
};

std::string_view to_string(G2Mode mode);
/// Throws ConfigError on an unknown name.
G2Mode g2_mode_from_string(std::string_view name);

/// Detection and retarded emission times of one photon pair.
struct TimingRecord {
  double t1 = 0.0;
  double t2 = 0.0;
  double transit1 = 0.0;
  double transit2 = 0.0;

  double emission1() const { return t1 - transit1; }
  double emission2() const { return t2 - transit2; }

  /// Throws DomainError if a photon would be detected before it could be emitted.
  static TimingRecord make(double t1, double t2, double transit1, double transit2);
  /// Record with zero transit, so detection and emission times coincide.
  static TimingRecord from_emission(double emission1, double emission2);
};

/// Single-photon field amplitude; G2 / (4 E^4) is the normalized g2.
struct FieldNormalization {
  double e_field = 1.0;

  double g2_norm() const { return 4.0 * e_field * e_field * e_field * e_field; }
};

/// Unnormalized G2 = 2 E^4 (exp(-2(gamma_a t1 + gamma_b t2))
///                          + exp(-(gamma_a + gamma_b)(t1 + t2)) cos(phi2 - phi1)),
/// with t1, t2 the emission times.
double g2_unnormalized(const EmitterPair& pair, double phi1, double phi2, const TimingRecord& timing,
                       FieldNormalization norm = {});

/// Normalized g2. For gamma_a == gamma_b both modes reduce to
/// 0.5 exp(-2 gamma (t1 + t2)) (1 + cos(phi2 - phi1)).
double g2_analytic(const EmitterPair& pair, double phi1, double phi2, const TimingRecord& timing,
                   G2Mode mode = G2Mode::paper_literal);

/// Fringe visibility (G_max - G_min) / (G_max + G_min) at detection times
/// t1, t2 for a shared transit time. Exactly 1 when gamma_a == gamma_b.
double visibility(const EmitterPair& pair, double t1, double t2,
                  G2Mode mode = G2Mode::paper_literal);

/// Brute-force g2: squared modulus of the sum of the two indistinguishable
/// two-photon amplitudes (A -> 1, B -> 2) and (B -> 1, A -> 2), scaled by 1/4.
/// Path phases: emitter A contributes 0 at both detectors, emitter B
/// contributes phi_i at detector i.
double g2_amplitude_oracle(const EmitterPair& pair, double phi1, double phi2,
                           const TimingRecord& timing);

/// Same sum with path phases taken from the plane-wave exponents
/// exp(-i k r_hat . R_n) of each detector.
double g2_amplitude_oracle(const EmitterPair& pair, const DetectorSetting& detector1,
                           const DetectorSetting& detector2, const TimingRecord& timing);

/// Two-atom state left behind by the first detection, in the basis {|ge>, |eg>}.
struct ConditionalState {
  std::complex<double> amplitude_ge;
  std::complex<double> amplitude_eg;

  double norm_squared() const { return std::norm(amplitude_ge) + std::norm(amplitude_eg); }
};

/// (|ge> + e^{i phi1} |eg>) / sqrt(2).
ConditionalState conditional_state(double phi1);

/// Probability, normalized to a maximum of 1, that the remaining excitation is
/// detected at a detector with phase phi2: (1 + cos(phi2 - phi1)) / 2 for the
/// state produced by conditional_state(phi1).
double second_detection_prob(const ConditionalState& state, double phi2);

}  // namespace tpi
