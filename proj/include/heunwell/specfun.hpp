#pragma once

#include <complex>

namespace heunwell {

using Complex = std::complex<double>;

/// Value of a special function together with a bound on its error.
///
/// `abs_error_estimate` covers series/quadrature truncation plus a
/// first-order rounding estimate; `terms_used` counts series terms or
/// quadrature nodes, whichever the chosen branch consumed.
struct EvalResult {
  Complex value{};
  double abs_error_estimate = 0.0;
  int terms_used = 0;
};

/// Gamma function for complex argument (Lanczos, g = 7, with reflection for
/// Re z < 1/2). Relative error is below 1e-13 for |z| <= 50.
/// Throws PoleError within 1e-14 of a non-positive integer.
EvalResult gamma(Complex z);

/// 1/Gamma(z), exactly zero at the poles of Gamma.
Complex recip_gamma(Complex z);

/// True when z lies within 1e-14 of 0, -1, -2, ...
bool near_nonpositive_integer(Complex z);

/// Kummer confluent hypergeometric function 1F1(a; b; z).
///
/// Taylor series with a rigorous ratio bound on the tail; for Re z < 0 the
/// series is summed for e^z 1F1(b - a; b; -z) instead. At most 500 terms.
/// Throws DegenerateB for b in {0, -1, -2, ...} and NoConvergence when the
/// tail bound is still above 1e-13 relative after the term budget.
EvalResult kummer_1f1(Complex a, Complex b, Complex z);

/// Hermite function H_nu(z) of arbitrary complex order through the Kummer
/// representation
///
///   H_nu(z) = sqrt(pi) 2^nu [ 1F1(-nu/2; 1/2; z^2) / Gamma((1 - nu)/2)
///                             - 2z 1F1((1 - nu)/2; 3/2; z^2) / Gamma(-nu/2) ].
///
/// A reciprocal Gamma at a pole contributes an exact zero, so integer orders
/// reduce to the Hermite polynomials.
EvalResult hermite_nu_kummer(Complex order, Complex z);

/// Hermite function H_nu(z).
///
/// Uses hermite_nu_kummer() unless Re z > 0 and the two Kummer terms cancel
/// beyond double precision. In that case the Laplace integral
///   H_mu(z) = (1/Gamma(-mu)) int_0^inf exp(-t^2 - 2 z t) t^(-mu-1) dt
/// (Re mu < 0) is evaluated by exp-sinh quadrature and lifted to the
/// requested order with H_(m+1) = 2z H_m - 2m H_(m-1).
EvalResult hermite_nu(Complex order, Complex z);

/// dH_nu/dz = 2 nu H_(nu-1)(z).
EvalResult hermite_nu_derivative(Complex order, Complex z);

}  // namespace heunwell
