#include "heunwell/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "heunwell/errors.hpp"
#include "heunwell/numerics.hpp"
#include "heunwell/parallel.hpp"

namespace heunwell {

namespace {

constexpr double kRescale = 1e150;
constexpr double kMaxDrift = 1e-6;
constexpr double kTurningFactor = 1.6;
constexpr double kDecayExponent = 20.0;

// Numerov on phi'' = (1/4 + r(t) (V - E)) phi over a uniform grid in t = ln x.
class Shooter {
 public:
  Shooter(const ShootingProblem& prob, double x_min, double x_max, int n)
      : n_(n), s_(prob.regular_exponent) {
    if (!(x_min > 0.0) || !(x_max > x_min)) throw DomainError("oracle: bad x range");
    if (n < 16) throw DomainError("oracle: n_grid too small");
    const double t0 = std::log(x_min);
    h_ = (std::log(x_max) - t0) / n;
    x_.resize(n + 1);
    q_.resize(n + 1);
    r_.resize(n + 1);
    const double k = 2.0 * prob.m / (prob.hbar * prob.hbar);
    for (int i = 0; i <= n; ++i) {
      x_[i] = std::exp(t0 + i * h_);
      r_[i] = k * x_[i] * x_[i];
      q_[i] = 0.25 + r_[i] * prob.potential(x_[i]);
    }
    x_.back() = x_max;
  }

  int size() const { return n_; }
  const std::vector<double>& x() const { return x_; }
  double potential_min_energy(const ShootingProblem& prob) const {
    double v = prob.potential(x_[0]);
    for (double xi : x_) v = std::min(v, prob.potential(xi));
    return v;
  }

  // Sign changes of the outward solution over the whole grid.
  int nodes(double e) const {
    double prev = 1.0;
    double cur = std::exp((s_ - 0.5) * h_);
    int count = 0;
    for (int i = 1; i < n_; ++i) {
      const double next = step(prev, cur, i, +1, e);
      if ((next < 0.0) != (cur < 0.0) || next == 0.0) ++count;
      prev = cur;
      cur = next;
      if (std::abs(cur) > kRescale) {
        prev /= kRescale;
        cur /= kRescale;
      }
    }
    return count;
  }

  // Largest index inside the classically allowed region.
  int turning_index(double e) const {
    int m = 2;
    for (int i = 0; i <= n_; ++i) {
      if (q_[i] - r_[i] * e <= 0.25) m = i;
    }
    return std::clamp(m, 2, n_ - 3);
  }

  // Wronskian-type mismatch of outward and inward solutions at index m.
  double mismatch(double e, int m) const {
    const auto out = outward(e, m + 1);
    const auto in = inward(e, m);
    const double w = out[m + 1] * in[m] - out[m] * in[m + 1];
    const double scale = std::abs(out[m]) * std::abs(in[m]) +
                         std::abs(out[m + 1]) * std::abs(in[m + 1]);
    return scale > 0.0 ? w / scale : w;
  }

  std::vector<double> outward(double e, int last) const {
    std::vector<double> phi(n_ + 1, 0.0);
    phi[0] = 1.0;
    phi[1] = std::exp((s_ - 0.5) * h_);
    for (int i = 1; i < last; ++i) {
      phi[i + 1] = step(phi[i - 1], phi[i], i, +1, e);
      if (std::abs(phi[i + 1]) > kRescale) {
        for (int j = 0; j <= i + 1; ++j) phi[j] /= kRescale;
      }
    }
    return phi;
  }

  std::vector<double> inward(double e, int first) const {
    std::vector<double> phi(n_ + 1, 0.0);
    phi[n_] = 0.0;
    phi[n_ - 1] = 1e-200;
    for (int i = n_ - 1; i > first; --i) {
      phi[i - 1] = step(phi[i + 1], phi[i], i, -1, e);
      if (std::abs(phi[i - 1]) > kRescale) {
        for (int j = i - 1; j <= n_; ++j) phi[j] /= kRescale;
      }
    }
    return phi;
  }

 private:
  double f(int i, double e) const { return 1.0 - h_ * h_ * (q_[i] - r_[i] * e) / 12.0; }

  double step(double prev, double cur, int i, int dir, double e) const {
    const double gi = q_[i] - r_[i] * e;
    return (2.0 * cur * (1.0 + 5.0 * h_ * h_ * gi / 12.0) - prev * f(i - dir, e)) /
           f(i + dir, e);
  }

  int n_;
  double s_;
  double h_ = 0.0;
  std::vector<double> x_, q_, r_;
};

std::vector<double> solve_on_grid(const ShootingProblem& prob, const Shooter& sh,
                                  int n_max) {
  const double e_floor = sh.potential_min_energy(prob);
  double gap = 1.0;
  double e_top = e_floor + gap;
  for (int it = 0; sh.nodes(e_top) < n_max; ++it) {
    if (it > 200) throw NotConverged("oracle: could not bracket the requested levels");
    gap *= 2.0;
    e_top = e_floor + gap;
  }

  return parallel_map<double>(static_cast<std::size_t>(n_max), [&](std::size_t idx) {
    const int k = static_cast<int>(idx) + 1;
    double lo = e_floor;
    double hi = e_top;
    int n_lo = sh.nodes(lo);
    int n_hi = sh.nodes(hi);
    for (int it = 0; !(n_lo == k - 1 && n_hi == k); ++it) {
      if (it > 300) throw NotConverged("oracle: node bracketing failed for level " +
                                       std::to_string(k));
      const double mid = 0.5 * (lo + hi);
      const int nm = sh.nodes(mid);
      if (nm >= k) {
        hi = mid;
        n_hi = nm;
      } else {
        lo = mid;
        n_lo = nm;
      }
    }
    const int m = sh.turning_index(0.5 * (lo + hi));
    double f_lo = sh.mismatch(lo, m);
    for (int it = 0; it < 200 && hi - lo > 2e-16 * std::abs(hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = sh.mismatch(mid, m);
      if (fm == 0.0) return mid;
      if ((fm > 0.0) == (f_lo > 0.0)) {
        lo = mid;
        f_lo = fm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  });
}

double outer_turning_point(const ShootingProblem& prob, double e, double x_guess) {
  // Walk outward until V exceeds e, then bisect.
  double hi = x_guess;
  for (int it = 0; prob.potential(hi) <= e; ++it) {
    if (it > 200) throw NotConverged("oracle: potential does not confine");
    hi *= 1.5;
  }
  double lo = hi;
  while (lo > 1e-300 && prob.potential(lo) > e) lo *= 0.9;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (prob.potential(mid) > e ? hi : lo) = mid;
  }
  return hi;
}

// Smallest x beyond the turning point with int kappa dx >= kDecayExponent.
double decay_point(const ShootingProblem& prob, double e, double x_turn) {
  const double k = 2.0 * prob.m / (prob.hbar * prob.hbar);
  double x = x_turn;
  double integral = 0.0;
  double dx = 1e-3 * x_turn;
  while (integral < kDecayExponent) {
    const double mid = x + 0.5 * dx;
    integral += std::sqrt(std::max(0.0, k * (prob.potential(mid) - e))) * dx;
    x += dx;
    dx *= 1.01;
  }
  return x;
}

}  // namespace

ShootingProblem shooting_problem(const PhysicalParams& p) {
  require_confining(p);
  ShootingProblem prob;
  prob.potential = [p](double x) { return potential_value(p, x); };
  prob.m = p.m;
  prob.hbar = p.hbar;
  return prob;
}

OracleResult numerov_solve(const ShootingProblem& problem, const OracleConfig& cfg,
                           int n_max) {
  if (n_max < 1) throw DomainError("oracle: n_max must be >= 1");
  if (cfg.n_grid < 2000) throw DomainError("oracle: n_grid must be >= 2000");
  if (!(cfg.x_min > 0.0)) throw DomainError("oracle: x_min must be positive");
  const bool automatic = !(cfg.x_max > 0.0);
  double x_max = automatic ? 10.0 : cfg.x_max;
  if (!(x_max > cfg.x_min)) throw DomainError("oracle: x_max must exceed x_min");

  std::vector<double> coarse;
  for (int attempt = 0;; ++attempt) {
    coarse = solve_on_grid(problem, Shooter(problem, cfg.x_min, x_max, cfg.n_grid), n_max);
    if (!automatic) break;
    const double x_turn = outer_turning_point(problem, coarse.back(), 0.5 * x_max);
    const double needed =
        std::max(kTurningFactor * x_turn, decay_point(problem, coarse.back(), x_turn));
    if (x_max >= needed) break;
    if (attempt > 20) throw NotConverged("oracle: x_max selection did not settle");
    x_max = 1.1 * needed;
  }

  const auto fine =
      solve_on_grid(problem, Shooter(problem, cfg.x_min, x_max, 2 * cfg.n_grid), n_max);
  OracleResult res;
  res.x_max = x_max;
  for (int k = 0; k < n_max; ++k) {
    const double drift = std::abs(fine[k] - coarse[k]) / std::abs(fine[k]);
    if (drift > kMaxDrift) {
      throw NotConverged("oracle: level " + std::to_string(k + 1) +
                         " moved by " + std::to_string(drift) + " under grid doubling");
    }
    // Numerov converges as h^4.
    res.energies.push_back(fine[k] + (fine[k] - coarse[k]) / 15.0);
    res.drift.push_back(drift);
  }
  return res;
}

std::vector<double> numerov_eigenvalues(const PhysicalParams& p, const OracleConfig& cfg,
                                        int n_max) {
  return numerov_solve(shooting_problem(p), cfg, n_max).energies;
}

Eigenfunction numerov_eigenfunction(const ShootingProblem& problem,
                                    const OracleConfig& cfg, double energy) {
  if (!(cfg.x_max > cfg.x_min)) throw DomainError("oracle: eigenfunction needs x_max");
  const Shooter sh(problem, cfg.x_min, cfg.x_max, cfg.n_grid);
  const int m = sh.turning_index(energy);
  auto out = sh.outward(energy, m + 1);
  const auto in = sh.inward(energy, m);
  if (in[m] == 0.0) throw NumericalError("oracle: inward solution vanishes at the match");
  const double join = out[m] / in[m];
  for (int i = m + 1; i <= sh.size(); ++i) out[i] = join * in[i];

  Eigenfunction ef;
  ef.x = sh.x();
  ef.psi.resize(ef.x.size());
  std::vector<double> sq(ef.x.size());
  for (std::size_t i = 0; i < ef.x.size(); ++i) {
    ef.psi[i] = std::sqrt(ef.x[i]) * out[i];
    sq[i] = ef.psi[i] * ef.psi[i];
  }
  const double norm = std::sqrt(simpson(ef.x, sq));
  for (auto& v : ef.psi) v /= norm;
  return ef;
}

EvalResult kummer_series_reference(Complex a, Complex b, Complex z, int terms) {
  if (terms < 1 || terms > 2000) throw DomainError("reference series: terms in [1, 2000]");
  if (near_nonpositive_integer(b)) throw DegenerateB("reference series: b is a pole");
  using LC = std::complex<long double>;
  const LC la(a.real(), a.imag()), lb(b.real(), b.imag()), lz(z.real(), z.imag());
  LC term = 1.0L;
  LC sum = 1.0L;
  int k = 0;
  for (; k < terms - 1 && term != LC{}; ++k) {
    term *= (la + static_cast<long double>(k)) * lz /
            ((lb + static_cast<long double>(k)) * static_cast<long double>(k + 1));
    sum += term;
  }
  // For j >= k the term ratio is at most (|a| + j)|z| / ((j - |b|)(j + 1)),
  // which decreases in j once j > |b|.
  double bound = 0.0;
  if (term != LC{}) {
    const double j = k;
    const double ratio = (std::abs(a) + j) * std::abs(z) / ((j - std::abs(b)) * (j + 1.0));
    bound = (j > std::abs(b) && ratio < 1.0)
                ? static_cast<double>(std::abs(term)) * ratio / (1.0 - ratio)
                : std::numeric_limits<double>::infinity();
  }
  const Complex value(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
  if (bound > 1e-12 * std::max(std::abs(value), 1e-300)) {
    throw TailNotSmall("reference series tail bound exceeds 1e-12 relative");
  }
  return {value, bound, k + 1};
}

}  // namespace heunwell
