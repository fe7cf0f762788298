#pragma once

#include <functional>
#include <span>
#include <vector>

#include "heunwell/potential.hpp"

namespace heunwell {

struct EnergyLevel {
  int n = 0;
  double a_exact = 0.0;
  double e_exact = 0.0;
  double e_approx14 = 0.0;
  double e_semiclassical = 0.0;

  double rel_err_approx14() const { return (e_approx14 - e_exact) / e_exact; }
  double rel_err_semiclassical() const { return (e_semiclassical - e_exact) / e_exact; }
};

struct WavefunctionTable {
  std::vector<double> x;
  std::vector<double> psi;
  double norm = 0.0;          // integral of psi^2 after normalization
  double raw_norm = 0.0;      // integral of |psi|^2 before normalization
  double tail_fraction = 0.0; // analytic tail beyond the grid / total
  double max_imag = 0.0;      // largest |Im psi| left after the phase rotation
};

/// sqrt(2a) H_(a+1/2)(-sqrt(2a)) + H_(a+3/2)(-sqrt(2a)).
double spectrum_fn_exact(double a);

/// (1 + 2a) H_(a-1/2)(-sqrt(2a)) + sqrt(2a) H_(a+1/2)(-sqrt(2a)).
double spectrum_fn_equivalent(double a);

/// 1 + sqrt(2a) H_(a+1/2)(-sqrt(2a)) / ((1 + 2a) H_(a-1/2)(-sqrt(2a))).
double auxiliary_F(double a);

enum class B0Variant { Exact, Rounded };

/// Gamma(1/3) / (6 3^(1/3) Gamma(2/3)) or the rounded 1/5.
double b0(B0Variant variant = B0Variant::Exact);

/// (a^(2/3) / (3 (1 + 2a) B0)) (3 B0 / a^(2/3) - sin(pi a - pi/3) / sin(pi a + pi/3)).
/// DenominatorZero within 1e-12 of a pole of the sine ratio.
double approx_F(double a, B0Variant variant = B0Variant::Exact);

/// 3 B0 / a^(2/3) - sin(pi a - pi/3) / sin(pi a + pi/3).
double transcendental_fn(double a, B0Variant variant = B0Variant::Exact);

/// Root of transcendental_fn() in (n, n + 2/3).
double transcendental_root(int n, B0Variant variant = B0Variant::Exact);

/// Roots of an arbitrary scalar function by scanning [lo, hi] with `step`
/// and refining every sign change to full precision.
std::vector<double> scan_roots(const std::function<double(double)>& fn, double lo,
                               double hi, double step);

/// Refines a sign-changing bracket by bisection to width 1e-6, then by a
/// secant iteration kept inside the bracket, to full double precision.
double refine_root(const std::function<double(double)>& fn, double lo, double hi);

/// First n_max roots above 0.6 of spectrum_fn_exact(), with energies.
std::vector<EnergyLevel> solve_levels_exact(const PhysicalParams& p, int n_max);

double approx_level(const PhysicalParams& p, int n);
double semiclassical_level(const PhysicalParams& p, int n);

/// Grid from near the origin to where every level up to `a_max` has decayed.
std::vector<double> default_wavefunction_grid(const PhysicalParams& p, double a_max,
                                              std::size_t points = 1201);

/// Normalized, real bound state on the given grid.
WavefunctionTable bound_state_wavefunction(const PhysicalParams& p,
                                           const EnergyLevel& level,
                                           std::span<const double> grid);

}  // namespace heunwell
