#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heunwell/potential.hpp"
#include "heunwell/specfun.hpp"

namespace heunwell {

struct TwoStateAmplitudes {
  Complex a1{1.0, 0.0};
  Complex a2{0.0, 0.0};
};

/// Rabi frequency U(t) >= 0 and detuning phase delta(t) with derivatives.
struct PulseConfig {
  double u0 = 1.0;
  double delta0 = 0.0;
  std::string shape = "constant";
  std::function<double(double)> U;
  std::function<double(double)> U_t;
  std::function<double(double)> delta;
  std::function<double(double)> delta_t;
};

/// U = u0, delta = rate t.
PulseConfig constant_pulse(double u0, double detuning_rate = 0.0);

/// U = u0 sech(t), delta = delta0 (ln cosh t + asymmetry t), so the detuning
/// delta_t = delta0 (tanh t + asymmetry) sweeps from delta0 (asymmetry - 1)
/// to delta0 (asymmetry + 1).
PulseConfig sech_pulse(double u0, double delta0, double asymmetry = 0.25);

struct TimeSpan {
  double t0 = 0.0;
  double t1 = 1.0;
};

enum class Dynamics { Nonlinear, Linear };

/// Samples of one run. For Nonlinear p = |a2|^2 and |a1|^2 + 2|a2|^2 is
/// conserved. For Linear the pair (a1, 2 a2) is the usual two-level
/// amplitude vector (c1, c2), |c1|^2 + |c2|^2 is conserved and
/// p = p_L = |c2|^2 / 2, so that |a1|^2 + 2p = 1 in both cases.
struct TwoStateTrajectory {
  Dynamics dynamics = Dynamics::Nonlinear;
  std::vector<double> t;
  std::vector<TwoStateAmplitudes> state;
  std::vector<double> p;
  std::vector<double> norm_drift;

  double final_probability() const { return p.empty() ? 0.0 : p.back(); }
  double max_norm_drift() const;
};

/// i a1' = U e^(-i delta) conj(a1) a2,  i a2' = (U/2) e^(i delta) a1^2.
/// Adaptive Dormand-Prince 5(4); samples at `samples` uniform times.
/// The local tolerance is tightened below `tol` if needed to keep the
/// invariant drift under 1e-10.
TwoStateTrajectory simulate_nonlinear(const PulseConfig& pulse, TimeSpan span,
                                      TwoStateAmplitudes init = {}, double tol = 1e-10,
                                      int samples = 2001);

/// Linear counterpart started from a1 = 1, a2 = 0:
/// i c1' = U e^(-i delta) c2,  i c2' = U e^(i delta) c1,  with a1 = c1, a2 = c2 / 2.
TwoStateTrajectory simulate_linear(const PulseConfig& pulse, TimeSpan span,
                                   double tol = 1e-10, int samples = 2001);

/// max |a2'' + (-i delta_t - U_t/U) a2' + U^2 a2 - 2 U^2 |a2|^2 a2| along the
/// trajectory. a2' comes from the right-hand side of the trajectory's own
/// dynamics, a2'' from 7-point local polynomial fits. DomainError if U = 0.
double second_order_residual(const TwoStateTrajectory& traj, const PulseConfig& pulse);

/// V(z) = -delta_z^2 / 4 - i delta_zz / 2 with delta_zz from local fits.
std::vector<Complex> potential_of_detuning(std::span<const Complex> delta_z,
                                           std::span<const double> grid);

/// Integrates -y^2/4 - i y'/2 = target(z) for y = delta_z along the grid.
/// Default seed: 2 sqrt(-target(z0)), the constant-potential fixed point.
/// BlowUp if |y| exceeds 1e6.
std::vector<Complex> invert_detuning(const std::function<double(double)>& target,
                                     std::span<const double> grid,
                                     std::optional<Complex> seed = std::nullopt);

/// Same with target(z) = (2m/hbar^2) V(z) - u0^2 for the potential of p.
std::vector<Complex> invert_detuning(const PhysicalParams& p, double u0,
                                     std::span<const double> grid,
                                     std::optional<Complex> seed = std::nullopt);

/// max |p(1-2p)^2 - [(1/U^2)(dp/dt)^2 - (int delta_t dp)^2]| along a
/// nonlinear trajectory started at a1 = 1, a2 = 0.
double integral_identity_residual(const TwoStateTrajectory& traj,
                                  const PulseConfig& pulse);

/// Same comparison against (1/U^2)(dp/dt)^2 + (int (delta_t/U) dp)^2, which
/// follows from the equations of motion.
double integral_identity_residual_corrected(const TwoStateTrajectory& traj,
                                            const PulseConfig& pulse);

/// max |p(1-2p)^2 - |int (U/2)(1 - 8p + 12p^2) e^(-i delta) dt|^2|.
double exact_integral_residual(const TwoStateTrajectory& traj, const PulseConfig& pulse);

/// Largest root in [0, 1/2] of p^2 - 2p^3 = (a0/u0^2)(p - pl_inf/2).
/// pl_inf in [0, 1] is accepted; linear runs produce values in [0, 1/2].
/// NoPhysicalRoot if none.
double final_probability_cubic(double a0_fit, double u0, double pl_inf);

/// 1/2 - ((2 - pl_inf)/4) sqrt(2 a0 / u0^2).
double final_probability_asymptotic(double a0_fit, double u0, double pl_inf);

struct SweepRow {
  double lambda = 0.0;
  double p_inf_numeric = 0.0;
  double pl_inf = 0.0;
  double p_inf_cubic = 0.0;
  double p_inf_asymptotic = 0.0;
};

struct SweepResult {
  double a0 = 0.0;
  double fit_rms = 0.0;
  std::vector<SweepRow> rows;
};

/// Least-squares a0 for the cubic model against (lambda, p_inf, pl_inf) data.
/// Golden-section search over log a0 in [1e-4, 1e4].
double fit_a0(std::span<const double> lambda, std::span<const double> p_inf,
              std::span<const double> pl_inf);

/// Final probabilities for u0 = sqrt(lambda) at every lambda, the fitted a0
/// and both model predictions. `make_pulse` builds the pulse for a given u0.
SweepResult saturation_sweep(const std::function<PulseConfig(double)>& make_pulse,
                             std::span<const double> lambdas, TimeSpan span,
                             double tol = 1e-10);

/// Shape used for sweeps when nothing else is given: sech_pulse(u0, 10, 0.25)
/// on [-12, 12].
PulseConfig default_pulse(double u0);
TimeSpan default_span();

}  // namespace heunwell
