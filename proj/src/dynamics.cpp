#include "tpi/dynamics.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <sstream>

#include "tpi/errors.hpp"

namespace tpi {

namespace {

constexpr double validation_tol = 1e-12;
constexpr double ode_abs_tol = 1e-12;
constexpr double ode_rel_tol = 1e-10;
constexpr std::size_t ode_max_steps = 5'000'000;

// 2x2 complex matrices in row-major order.
using Mat2 = std::array<Complex, 4>;
// Real/imaginary interleaving of a Mat2 for the integrator.
using OdeState = std::array<double, 8>;

Mat2 mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat2 mul(const Mat2& a, const Mat2& b, const Mat2& c) { return mul(mul(a, b), c); }

Mat2 axpy(Complex alpha, const Mat2& x, const Mat2& y) {
  Mat2 r;
  for (std::size_t k = 0; k < 4; ++k) r[k] = alpha * x[k] + y[k];
  return r;
}

Complex mat_trace(const Mat2& a) { return a[0] + a[3]; }

// Basis {|e>, |g>}.
const Mat2 sigma_z = {0.5, 0.0, 0.0, -0.5};
const Mat2 lowering = {0.0, 0.0, 1.0, 0.0};  // |g><e|
const Mat2 raising = {0.0, 1.0, 0.0, 0.0};   // |e><g|

OdeState pack(const Mat2& m) {
  OdeState s;
  for (std::size_t k = 0; k < 4; ++k) {
    s[2 * k] = m[k].real();
    s[2 * k + 1] = m[k].imag();
  }
  return s;
}

Mat2 unpack(const OdeState& s) {
  Mat2 m;
  for (std::size_t k = 0; k < 4; ++k) m[k] = {s[2 * k], s[2 * k + 1]};
  return m;
}

// d rho/dt = -i omega [Sz, rho] - gamma (s+ s- rho - 2 s- rho s+ + rho s+ s-),
// written with the lowering operator s- = |g><e| and raising s+ = |e><g|.
Mat2 liouvillian(const Mat2& rho, double gamma, double omega) {
  const Complex i{0.0, 1.0};
  const Mat2 comm = axpy(-1.0, mul(rho, sigma_z), mul(sigma_z, rho));
  const Mat2 rl = mul(raising, lowering);
  Mat2 diss = axpy(1.0, mul(rl, rho), mul(rho, rl));
  diss = axpy(-2.0, mul(lowering, rho, raising), diss);
  return axpy(-i * omega, comm, axpy(-gamma, diss, Mat2{}));
}

// Heisenberg-picture generator: Tr[A L(rho)] = Tr[L^dagger(A) rho].
Mat2 adjoint_liouvillian(const Mat2& a, double gamma, double omega) {
  const Complex i{0.0, 1.0};
  const Mat2 comm = axpy(-1.0, mul(a, sigma_z), mul(sigma_z, a));
  const Mat2 rl = mul(raising, lowering);
  Mat2 diss = axpy(1.0, mul(a, rl), mul(rl, a));
  diss = axpy(-2.0, mul(raising, a, lowering), diss);
  return axpy(i * omega, comm, axpy(-gamma, diss, Mat2{}));
}

template <class Generator>
Mat2 integrate(const Mat2& initial, double duration, Generator generator) {
  namespace odeint = boost::numeric::odeint;
  if (duration == 0.0) return initial;

  OdeState x = pack(initial);
  auto system = [&](const OdeState& s, OdeState& dsdt, double) {
    dsdt = pack(generator(unpack(s)));
  };
  std::size_t steps = 0;
  double last_t = 0.0;
  auto observer = [&](const OdeState&, double t) {
    last_t = t;
    if (++steps > ode_max_steps) {
      std::ostringstream msg;
      msg << "integrator exceeded " << ode_max_steps << " steps at t = " << t << " of "
          << duration;
      throw NumericalError(msg.str());
    }
  };
  auto stepper = odeint::make_controlled(ode_abs_tol, ode_rel_tol,
                                         odeint::runge_kutta_dopri5<OdeState>());
  try {
    odeint::integrate_adaptive(stepper, system, x, 0.0, duration, duration * 1e-3, observer);
  } catch (const NumericalError&) {
    throw;
  } catch (const std::exception& e) {
    std::ostringstream msg;
    msg << "integrator failed after " << steps << " steps (t = " << last_t << "): " << e.what();
    throw NumericalError(msg.str());
  }
  for (double v : x) {
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "integrator produced a non-finite state after " << steps << " steps";
      throw NumericalError(msg.str());
    }
  }
  return unpack(x);
}

void check_rates(double gamma, double omega) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be >= 0");
  if (!std::isfinite(omega)) throw DomainError("omega must be finite");
}

void check_query(const CorrelatorQuery& q) {
  check_rates(q.gamma, q.omega);
  if (!(q.t_i >= 0.0)) throw DomainError("t_i must be >= 0");
  if (!(q.t_j >= q.t_i)) throw DomainError("two-time correlator requires t_j >= t_i");
  if (!(q.initial_excited_population >= 0.0 && q.initial_excited_population <= 1.0)) {
    throw DomainError("initial excited population must lie in [0, 1]");
  }
}

}  // namespace

AtomState::AtomState(const Elements& rho) : rho_(rho) {
  if (hermiticity_error() > validation_tol) {
    throw DomainError("density matrix is not Hermitian");
  }
  if (std::abs(trace() - 1.0) > validation_tol || std::abs(mat_trace(rho_).imag()) > validation_tol) {
    throw DomainError("density matrix trace differs from 1");
  }
  if (min_eigenvalue() < -validation_tol) {
    throw DomainError("density matrix has a negative eigenvalue");
  }
}

AtomState AtomState::excited() { return AtomState({1.0, 0.0, 0.0, 0.0}); }
AtomState AtomState::ground() { return AtomState({0.0, 0.0, 0.0, 1.0}); }
AtomState AtomState::mixture(double p) { return AtomState({p, 0.0, 0.0, 1.0 - p}); }

AtomState AtomState::pure(double p, double theta) {
  const Complex c = std::sqrt(p * (1.0 - p)) * std::polar(1.0, -theta);
  return AtomState({p, c, std::conj(c), 1.0 - p});
}

double AtomState::hermiticity_error() const {
  return std::max({std::abs(rho_[0].imag()), std::abs(rho_[3].imag()),
                   std::abs(rho_[1] - std::conj(rho_[2]))});
}

double AtomState::min_eigenvalue() const {
  const double a = rho_[0].real();
  const double d = rho_[3].real();
  const Complex b = 0.5 * (rho_[1] + std::conj(rho_[2]));
  return 0.5 * (a + d) - std::hypot(0.5 * (a - d), std::abs(b));
}

AtomState evolve(const AtomState& initial, double gamma, double omega, double t) {
  check_rates(gamma, omega);
  if (!(t >= 0.0)) throw DomainError("evolution time must be >= 0");
  const double p = initial.ee().real() * std::exp(-2.0 * gamma * t);
  const Complex eg = initial.eg() * std::exp(Complex{-gamma * t, -omega * t});
  return AtomState({p, eg, std::conj(eg), 1.0 - p});
}

AtomState::Elements evolve_numeric(const AtomState& initial, double gamma, double omega,
                                   double t) {
  check_rates(gamma, omega);
  if (!(t >= 0.0)) throw DomainError("evolution time must be >= 0");
  return integrate(initial.elements(), t,
                   [&](const Mat2& rho) { return liouvillian(rho, gamma, omega); });
}

Complex two_time_correlator(const CorrelatorQuery& q) {
  check_query(q);
  const double tau = q.t_j - q.t_i;
  return std::exp(Complex{-q.gamma * tau, q.omega * tau}) * q.initial_excited_population *
         std::exp(-2.0 * q.gamma * q.t_i);
}

Complex regression_oracle(const CorrelatorQuery& q) {
  check_query(q);
  const auto rho_i = evolve_numeric(AtomState::mixture(q.initial_excited_population), q.gamma,
                                    q.omega, q.t_i);
  const Mat2 source = mul(lowering, rho_i);
  const Mat2 observable = integrate(raising, q.t_j - q.t_i, [&](const Mat2& a) {
    return adjoint_liouvillian(a, q.gamma, q.omega);
  });
  return mat_trace(mul(observable, source));
}

}  // namespace tpi
