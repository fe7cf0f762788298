#include "heunwell/twostate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "heunwell/errors.hpp"
#include "heunwell/numerics.hpp"
#include "heunwell/parallel.hpp"

namespace heunwell {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<Complex, 2>;
constexpr Complex I{0.0, 1.0};
constexpr double kMaxDrift = 1e-10;
constexpr double kMinTol = 1e-14;
constexpr double kBlowUp = 1e6;

double stable_log_cosh(double t) {
  const double a = std::abs(t);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

void check_pulse(const PulseConfig& pulse) {
  if (!pulse.U || !pulse.U_t || !pulse.delta || !pulse.delta_t) {
    throw DomainError("pulse is missing U, U_t, delta or delta_t");
  }
}

void check_span(TimeSpan span, int samples) {
  if (!(span.t1 > span.t0)) throw DomainError("time span must have t1 > t0");
  if (samples < 8) throw DomainError("at least 8 samples are required");
}

double invariant(Dynamics d, const TwoStateAmplitudes& s) {
  const double weight = d == Dynamics::Nonlinear ? 2.0 : 4.0;
  return std::norm(s.a1) + weight * std::norm(s.a2);
}

template <typename Rhs>
TwoStateTrajectory integrate(Dynamics dynamics, Rhs rhs, TimeSpan span,
                             TwoStateAmplitudes init, double tol, int samples) {
  if (!(tol >= 1e-12 && tol <= 1e-6)) throw DomainError("tol must lie in [1e-12, 1e-6]");
  check_span(span, samples);
  if (std::abs(invariant(dynamics, init) - 1.0) > 1e-9) {
    throw DomainError("initial amplitudes violate the norm invariant");
  }
  const auto times = linspace(span.t0, span.t1, static_cast<std::size_t>(samples));

  for (double local_tol = tol;; local_tol /= 10.0) {
    TwoStateTrajectory traj;
    traj.dynamics = dynamics;
    State x{init.a1, init.a2};
    auto observer = [&](const State& s, double t) {
      const TwoStateAmplitudes a{s[0], s[1]};
      traj.t.push_back(t);
      traj.state.push_back(a);
      traj.p.push_back(dynamics == Dynamics::Nonlinear ? std::norm(a.a2)
                                                       : 2.0 * std::norm(a.a2));
      traj.norm_drift.push_back(invariant(dynamics, a) - 1.0);
    };
    try {
      auto stepper =
          odeint::make_controlled(local_tol, local_tol, odeint::runge_kutta_dopri5<State>());
      odeint::integrate_times(stepper, rhs, x, times.begin(), times.end(),
                              (span.t1 - span.t0) / (samples - 1), observer);
    } catch (const odeint::odeint_error& e) {
      throw StepFailure(std::string("integrator failed: ") + e.what());
    }
    if (traj.max_norm_drift() <= kMaxDrift || local_tol / 10.0 < kMinTol) return traj;
  }
}

// Time derivative of a2 implied by the trajectory's own equations.
Complex a2_rate(Dynamics d, const TwoStateAmplitudes& s, double u, double delta) {
  const Complex drive = -I * 0.5 * u * std::exp(I * delta);
  return d == Dynamics::Nonlinear ? drive * s.a1 * s.a1 : drive * s.a1;
}

void require_nonlinear_from_ground(const TwoStateTrajectory& traj) {
  if (traj.dynamics != Dynamics::Nonlinear) {
    throw DomainError("identity applies to nonlinear trajectories");
  }
  if (traj.t.size() < 8) throw DomainError("trajectory too short");
  if (std::abs(traj.state.front().a2) > 1e-12) {
    throw DomainError("identity requires the run to start from a2 = 0");
  }
}

struct IdentityTerms {
  std::vector<double> lhs;   // p (1 - 2p)^2
  std::vector<double> pdot;  // local-fit derivative of p
  std::vector<double> u;
  std::vector<double> delta_t;
};

IdentityTerms identity_terms(const TwoStateTrajectory& traj, const PulseConfig& pulse) {
  check_pulse(pulse);
  require_nonlinear_from_ground(traj);
  IdentityTerms terms;
  terms.pdot = local_derivative<double>(traj.t, traj.p);
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    const double p = traj.p[i];
    terms.lhs.push_back(p * (1.0 - 2.0 * p) * (1.0 - 2.0 * p));
    terms.u.push_back(pulse.U(traj.t[i]));
    terms.delta_t.push_back(pulse.delta_t(traj.t[i]));
  }
  return terms;
}

// (dp/dt / U)^2, zero where both vanish.
double scaled_rate_sq(double pdot, double u) {
  if (u == 0.0) {
    if (std::abs(pdot) > 1e-12) throw DomainError("dp/dt nonzero where U vanishes");
    return 0.0;
  }
  return (pdot / u) * (pdot / u);
}

}  // namespace

double TwoStateTrajectory::max_norm_drift() const {
  double m = 0.0;
  for (double d : norm_drift) m = std::max(m, std::abs(d));
  return m;
}

PulseConfig constant_pulse(double u0, double detuning_rate) {
  if (!(u0 >= 0.0)) throw DomainError("u0 must be non-negative");
  PulseConfig p;
  p.u0 = u0;
  p.delta0 = detuning_rate;
  p.shape = "constant";
  p.U = [u0](double) { return u0; };
  p.U_t = [](double) { return 0.0; };
  p.delta = [detuning_rate](double t) { return detuning_rate * t; };
  p.delta_t = [detuning_rate](double) { return detuning_rate; };
  return p;
}

PulseConfig sech_pulse(double u0, double delta0, double asymmetry) {
  if (!(u0 >= 0.0)) throw DomainError("u0 must be non-negative");
  PulseConfig p;
  p.u0 = u0;
  p.delta0 = delta0;
  p.shape = "sech";
  p.U = [u0](double t) { return u0 / std::cosh(t); };
  p.U_t = [u0](double t) { return -u0 * std::tanh(t) / std::cosh(t); };
  p.delta = [delta0, asymmetry](double t) {
    return delta0 * (stable_log_cosh(t) + asymmetry * t);
  };
  p.delta_t = [delta0, asymmetry](double t) { return delta0 * (std::tanh(t) + asymmetry); };
  return p;
}

PulseConfig default_pulse(double u0) { return sech_pulse(u0, 10.0, 0.25); }

TimeSpan default_span() { return {-12.0, 12.0}; }

TwoStateTrajectory simulate_nonlinear(const PulseConfig& pulse, TimeSpan span,
                                      TwoStateAmplitudes init, double tol, int samples) {
  check_pulse(pulse);
  auto rhs = [&pulse](const State& s, State& ds, double t) {
    const double u = pulse.U(t);
    const double d = pulse.delta(t);
    ds[0] = -I * u * std::exp(-I * d) * std::conj(s[0]) * s[1];
    ds[1] = -I * 0.5 * u * std::exp(I * d) * s[0] * s[0];
  };
  return integrate(Dynamics::Nonlinear, rhs, span, init, tol, samples);
}

TwoStateTrajectory simulate_linear(const PulseConfig& pulse, TimeSpan span, double tol,
                                   int samples) {
  check_pulse(pulse);
  // State holds (c1, c2 / 2).
  auto rhs = [&pulse](const State& s, State& ds, double t) {
    const double u = pulse.U(t);
    const double d = pulse.delta(t);
    ds[0] = -I * u * std::exp(-I * d) * (2.0 * s[1]);
    ds[1] = -I * 0.5 * u * std::exp(I * d) * s[0];
  };
  return integrate(Dynamics::Linear, rhs, span, TwoStateAmplitudes{}, tol, samples);
}

double second_order_residual(const TwoStateTrajectory& traj, const PulseConfig& pulse) {
  check_pulse(pulse);
  const std::size_t n = traj.t.size();
  if (n < 7) throw DomainError("trajectory too short for local fits");
  std::vector<Complex> a2p(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = traj.t[i];
    a2p[i] = a2_rate(traj.dynamics, traj.state[i], pulse.U(t), pulse.delta(t));
  }
  const auto a2pp = local_derivative<Complex>(traj.t, a2p, 7);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = traj.t[i];
    const double u = pulse.U(t);
    if (u == 0.0) throw DomainError("second-order form divides by U, which vanishes");
    const Complex a2 = traj.state[i].a2;
    const Complex r = a2pp[i] + (-I * pulse.delta_t(t) - pulse.U_t(t) / u) * a2p[i] +
                      u * u * a2 - 2.0 * u * u * std::norm(a2) * a2;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

std::vector<Complex> potential_of_detuning(std::span<const Complex> delta_z,
                                           std::span<const double> grid) {
  if (delta_z.size() != grid.size()) throw DomainError("size mismatch");
  const auto dzz = local_derivative<Complex>(grid, delta_z, 7);
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    v[i] = -delta_z[i] * delta_z[i] / 4.0 - I * dzz[i] / 2.0;
  }
  return v;
}

std::vector<Complex> invert_detuning(const std::function<double(double)>& target,
                                     std::span<const double> grid,
                                     std::optional<Complex> seed) {
  if (grid.size() < 2) throw DomainError("invert_detuning needs at least 2 grid points");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw DomainError("grid must be increasing");
  }
  using Y = std::array<Complex, 1>;
  Y y{seed.value_or(2.0 * std::sqrt(Complex(-target(grid.front()))))};
  std::vector<Complex> out;
  out.reserve(grid.size());
  // -y^2/4 - i y'/2 = T  <=>  y' = 2i (T + y^2/4)
  auto rhs = [&target](const Y& s, Y& ds, double z) {
    ds[0] = 2.0 * I * (target(z) + s[0] * s[0] / 4.0);
  };
  auto observer = [&out](const Y& s, double) {
    if (!(std::abs(s[0]) <= kBlowUp)) throw BlowUp("detuning profile escapes |delta_z| > 1e6");
    out.push_back(s[0]);
  };
  try {
    auto stepper = odeint::make_controlled(1e-12, 1e-12, odeint::runge_kutta_dopri5<Y>());
    odeint::integrate_times(stepper, rhs, y, grid.begin(), grid.end(),
                            (grid.back() - grid.front()) / (10.0 * grid.size()), observer);
  } catch (const odeint::odeint_error& e) {
    throw BlowUp(std::string("detuning profile integration failed: ") + e.what());
  }
  return out;
}

std::vector<Complex> invert_detuning(const PhysicalParams& p, double u0,
                                     std::span<const double> grid,
                                     std::optional<Complex> seed) {
  validate(p);
  if (!(grid.front() > 0.0)) throw DomainError("invert_detuning needs z > 0");
  const double k = 2.0 * p.m / (p.hbar * p.hbar);
  return invert_detuning([=](double z) { return k * potential_value(p, z) - u0 * u0; },
                         grid, seed);
}

double integral_identity_residual(const TwoStateTrajectory& traj,
                                  const PulseConfig& pulse) {
  const auto t = identity_terms(traj, pulse);
  std::vector<double> integrand(traj.t.size());
  for (std::size_t i = 0; i < integrand.size(); ++i) integrand[i] = t.delta_t[i] * t.pdot[i];
  const auto integral = cumulative_integral<double>(traj.t, integrand);
  double worst = 0.0;
  for (std::size_t i = 0; i < integrand.size(); ++i) {
    const double rhs = scaled_rate_sq(t.pdot[i], t.u[i]) - integral[i] * integral[i];
    worst = std::max(worst, std::abs(t.lhs[i] - rhs));
  }
  return worst;
}

double integral_identity_residual_corrected(const TwoStateTrajectory& traj,
                                            const PulseConfig& pulse) {
  const auto t = identity_terms(traj, pulse);
  std::vector<double> integrand(traj.t.size(), 0.0);
  for (std::size_t i = 0; i < integrand.size(); ++i) {
    if (t.u[i] != 0.0) integrand[i] = t.delta_t[i] / t.u[i] * t.pdot[i];
  }
  const auto integral = cumulative_integral<double>(traj.t, integrand);
  double worst = 0.0;
  for (std::size_t i = 0; i < integrand.size(); ++i) {
    const double rhs = scaled_rate_sq(t.pdot[i], t.u[i]) + integral[i] * integral[i];
    worst = std::max(worst, std::abs(t.lhs[i] - rhs));
  }
  return worst;
}

double exact_integral_residual(const TwoStateTrajectory& traj, const PulseConfig& pulse) {
  check_pulse(pulse);
  require_nonlinear_from_ground(traj);
  std::vector<Complex> integrand(traj.t.size());
  for (std::size_t i = 0; i < integrand.size(); ++i) {
    const double t = traj.t[i];
    const double p = traj.p[i];
    integrand[i] = 0.5 * pulse.U(t) * (1.0 - 8.0 * p + 12.0 * p * p) *
                   std::exp(-I * pulse.delta(t));
  }
  const auto integral = cumulative_integral<Complex>(traj.t, integrand);
  double worst = 0.0;
  for (std::size_t i = 0; i < integrand.size(); ++i) {
    const double p = traj.p[i];
    worst = std::max(worst, std::abs(p * (1.0 - 2.0 * p) * (1.0 - 2.0 * p) -
                                     std::norm(integral[i])));
  }
  return worst;
}

double final_probability_cubic(double a0_fit, double u0, double pl_inf) {
  if (!(a0_fit > 0.0) || !(u0 > 0.0)) throw DomainError("a0 and u0 must be positive");
  if (!(pl_inf >= 0.0 && pl_inf <= 1.0)) throw DomainError("pl_inf must lie in [0, 1]");
  const double k = a0_fit / (u0 * u0);
  // 2p^3 - p^2 + k p - k pl_inf / 2 = 0, monic form p^3 + b p^2 + c p + d.
  const double b = -0.5;
  const double c = 0.5 * k;
  const double d = -0.25 * k * pl_inf;
  const double P = c - b * b / 3.0;
  const double Q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
  const double disc = 0.25 * Q * Q + P * P * P / 27.0;
  std::vector<double> roots;
  if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    roots.push_back(std::cbrt(-0.5 * Q + sq) + std::cbrt(-0.5 * Q - sq) - b / 3.0);
  } else {
    const double r = 2.0 * std::sqrt(std::max(0.0, -P / 3.0));
    const double arg = r > 0.0 ? std::clamp(3.0 * Q / (P * r), -1.0, 1.0) : 0.0;
    const double theta = std::acos(arg) / 3.0;
    for (int j = 0; j < 3; ++j) {
      roots.push_back(r * std::cos(theta - 2.0 * std::numbers::pi * j / 3.0) - b / 3.0);
    }
  }
  double best = -1.0;
  for (double x : roots) {
    for (int it = 0; it < 3; ++it) {
      const double f = ((x + b) * x + c) * x + d;
      const double df = (3.0 * x + 2.0 * b) * x + c;
      if (df == 0.0) break;
      x -= f / df;
    }
    if (x >= -1e-12 && x <= 0.5 + 1e-12) best = std::max(best, std::clamp(x, 0.0, 0.5));
  }
  if (best < 0.0) throw NoPhysicalRoot("cubic has no real root in [0, 1/2]");
  return best;
}

double final_probability_asymptotic(double a0_fit, double u0, double pl_inf) {
  if (!(u0 > 0.0)) throw DomainError("u0 must be positive");
  return 0.5 - (2.0 - pl_inf) / 4.0 * std::sqrt(2.0 * a0_fit / (u0 * u0));
}

double fit_a0(std::span<const double> lambda, std::span<const double> p_inf,
              std::span<const double> pl_inf) {
  if (lambda.empty() || lambda.size() != p_inf.size() || lambda.size() != pl_inf.size()) {
    throw DomainError("fit_a0: inconsistent sweep data");
  }
  auto cost = [&](double log_a0) {
    const double a0 = std::exp(log_a0);
    double sum = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      double model;
      try {
        model = final_probability_cubic(a0, std::sqrt(lambda[i]), pl_inf[i]);
      } catch (const NoPhysicalRoot&) {
        model = -1.0;
      }
      sum += (model - p_inf[i]) * (model - p_inf[i]);
    }
    return sum;
  };
  const double lo = std::log(1e-4);
  const double hi = std::log(1e4);
  constexpr int kScan = 161;
  int best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScan; ++i) {
    const double c = cost(lo + (hi - lo) * i / (kScan - 1));
    if (c < best_cost) {
      best_cost = c;
      best = i;
    }
  }
  double a = lo + (hi - lo) * std::max(0, best - 1) / (kScan - 1);
  double b = lo + (hi - lo) * std::min(kScan - 1, best + 1) / (kScan - 1);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double f1 = cost(x1);
  double f2 = cost(x2);
  while (b - a > 1e-10) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = cost(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = cost(x2);
    }
  }
  return std::exp(0.5 * (a + b));
}

SweepResult saturation_sweep(const std::function<PulseConfig(double)>& make_pulse,
                             std::span<const double> lambdas, TimeSpan span, double tol) {
  if (lambdas.empty()) throw DomainError("sweep needs at least one lambda");
  for (double l : lambdas) {
    if (!(l > 0.0)) throw DomainError("lambda must be positive");
  }
  SweepResult res;
  res.rows = parallel_map<SweepRow>(lambdas.size(), [&](std::size_t i) {
    const double u0 = std::sqrt(lambdas[i]);
    const PulseConfig pulse = make_pulse(u0);
    SweepRow row;
    row.lambda = lambdas[i];
    row.p_inf_numeric = simulate_nonlinear(pulse, span, {}, tol).final_probability();
    row.pl_inf = std::clamp(simulate_linear(pulse, span, tol).final_probability(), 0.0, 0.5);
    return row;
  });
  std::vector<double> l, p, pl;
  for (const auto& r : res.rows) {
    l.push_back(r.lambda);
    p.push_back(r.p_inf_numeric);
    pl.push_back(r.pl_inf);
  }
  res.a0 = fit_a0(l, p, pl);
  double sq = 0.0;
  for (auto& r : res.rows) {
    const double u0 = std::sqrt(r.lambda);
    try {
      r.p_inf_cubic = final_probability_cubic(res.a0, u0, r.pl_inf);
    } catch (const NoPhysicalRoot&) {
      r.p_inf_cubic = std::numeric_limits<double>::quiet_NaN();
    }
    r.p_inf_asymptotic = final_probability_asymptotic(res.a0, u0, r.pl_inf);
    sq += (r.p_inf_cubic - r.p_inf_numeric) * (r.p_inf_cubic - r.p_inf_numeric);
  }
  res.fit_rms = std::sqrt(sq / static_cast<double>(res.rows.size()));
  return res;
}

}  // namespace heunwell
