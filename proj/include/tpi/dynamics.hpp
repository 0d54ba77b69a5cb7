#pragma once

#include <array>
#include <complex>

namespace tpi {

using Complex = std::complex<double>;

/// Density matrix of one two-level atom in the basis {|e>, |g>}.
class AtomState {
 public:
  /// Row-major elements: ee, eg, ge, gg.
  using Elements = std::array<Complex, 4>;

  /// Validates Hermiticity, unit trace and positivity (tolerance 1e-12).
  explicit AtomState(const Elements& rho);

  static AtomState excited();
  static AtomState ground();
  /// Diagonal state with excited population p.
  static AtomState mixture(double excited_population);
  /// |psi> = sqrt(p)|e> + sqrt(1-p) e^{i theta}|g> with coherence rho_eg = sqrt(p(1-p)) e^{-i theta}.
  static AtomState pure(double excited_population, double theta);

  Complex ee() const { return rho_[0]; }
  Complex eg() const { return rho_[1]; }
  Complex ge() const { return rho_[2]; }
  Complex gg() const { return rho_[3]; }
  const Elements& elements() const { return rho_; }

  double trace() const { return (rho_[0] + rho_[3]).real(); }
  /// max |rho - rho^dagger| over elements.
  double hermiticity_error() const;
  /// Smallest eigenvalue of the Hermitian part.
  double min_eigenvalue() const;

 private:
  Elements rho_;
};

/// Closed-form solution of the spontaneous-emission master equation:
/// rho_ee decays as exp(-2 gamma t), rho_eg as exp((-i omega - gamma) t).
AtomState evolve(const AtomState& initial, double gamma, double omega, double t);

/// Adaptive Runge-Kutta (Dormand-Prince 5(4)) integration of the same master
/// equation, rel tol 1e-10, abs tol 1e-12. Returns the raw matrix without
/// re-validating it, so trace and Hermiticity drift can be inspected.
AtomState::Elements evolve_numeric(const AtomState& initial, double gamma, double omega, double t);

struct CorrelatorQuery {
  double gamma = 1.0;
  double omega = 0.0;
  double t_i = 0.0;
  double t_j = 0.0;
  double initial_excited_population = 1.0;
};

/// <S-(t_j) S+(t_i)> from the quantum regression theorem in closed form,
/// with S+ the atomic lowering operator. Requires t_j >= t_i >= 0.
Complex two_time_correlator(const CorrelatorQuery& q);

/// The same correlator computed numerically: the atom (initially diagonal with
/// the given excited population) is integrated to t_i, the lowering operator
/// is applied, and the raising operator is propagated under the adjoint
/// master equation over t_j - t_i.
Complex regression_oracle(const CorrelatorQuery& q);

}  // namespace tpi
