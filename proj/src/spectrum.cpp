#include "heunwell/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "heunwell/closedform.hpp"
#include "heunwell/errors.hpp"
#include "heunwell/numerics.hpp"
#include "heunwell/parallel.hpp"
#include "heunwell/specfun.hpp"

namespace heunwell {

namespace {

using std::numbers::pi;

constexpr double kScanStart = 0.6;
constexpr double kScanStep = 0.05;
constexpr int kMaxExpansions = 20;
constexpr double kTailTolerance = 1e-6;

void require_positive_a(double a) {
  if (!(a > 0.0)) throw DomainError("spectrum functions require a > 0");
}

double hermite_real(double order, double z) { return hermite_nu(order, z).value.real(); }

double prefactor(const PhysicalParams& p) {
  require_confining(p);
  return std::pow(128.0 * p.hbar * p.hbar * p.v1 * p.v1 * p.v1 / (9.0 * p.m), 0.25);
}

}  // namespace

double spectrum_fn_exact(double a) {
  require_positive_a(a);
  const double s = std::sqrt(2.0 * a);
  return s * hermite_real(a + 0.5, -s) + hermite_real(a + 1.5, -s);
}

double spectrum_fn_equivalent(double a) {
  require_positive_a(a);
  const double s = std::sqrt(2.0 * a);
  return (1.0 + 2.0 * a) * hermite_real(a - 0.5, -s) + s * hermite_real(a + 0.5, -s);
}

double auxiliary_F(double a) {
  require_positive_a(a);
  const double s = std::sqrt(2.0 * a);
  const double num = s * hermite_real(a + 0.5, -s);
  const double den = (1.0 + 2.0 * a) * hermite_real(a - 0.5, -s);
  if (std::abs(den) < 1e-14 * std::max(1.0, std::abs(num))) {
    throw DenominatorZero("auxiliary_F: H_(a-1/2)(-sqrt(2a)) vanishes");
  }
  return 1.0 + num / den;
}

double b0(B0Variant variant) {
  if (variant == B0Variant::Rounded) return 0.2;
  const double g13 = gamma(Complex(1.0 / 3.0)).value.real();
  const double g23 = gamma(Complex(2.0 / 3.0)).value.real();
  return g13 / (6.0 * std::cbrt(3.0) * g23);
}

double transcendental_fn(double a, B0Variant variant) {
  require_positive_a(a);
  const double den = std::sin(pi * a + pi / 3.0);
  if (std::abs(den) < 1e-12) throw DenominatorZero("sin(pi a + pi/3) vanishes");
  return 3.0 * b0(variant) / std::cbrt(a * a) - std::sin(pi * a - pi / 3.0) / den;
}

double approx_F(double a, B0Variant variant) {
  const double a23 = std::cbrt(a * a);
  return a23 / (3.0 * (1.0 + 2.0 * a) * b0(variant)) * transcendental_fn(a, variant);
}

double refine_root(const std::function<double(double)>& fn, double lo, double hi) {
  double flo = fn(lo);
  double fhi = fn(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw RootNotFound("refine_root: no sign change");
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    const double fm = fn(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  // Secant steps from the bracket ends; fall back to bisection whenever
  // a step leaves the bracket.
  for (int it = 0; it < 100; ++it) {
    double x = hi - fhi * (hi - lo) / (fhi - flo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double fx = fn(x);
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi)) break;
    if (std::abs(x - lo) < 1e-15 * std::abs(x) || std::abs(hi - x) < 1e-15 * std::abs(x)) {
      // One end is stuck; a bisection step restores progress.
      const double mid = 0.5 * (lo + hi);
      const double fm = fn(mid);
      if (fm == 0.0) return mid;
      if ((fm > 0.0) == (flo > 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
        fhi = fm;
      }
    }
  }
  if (hi - lo > 1e-12) throw RootNotFound("refine_root: bracket did not shrink");
  return std::abs(flo) < std::abs(fhi) ? lo : hi;
}

std::vector<double> scan_roots(const std::function<double(double)>& fn, double lo,
                               double hi, double step) {
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  const auto xs = linspace(lo, lo + step * static_cast<double>(count - 1), count);
  const auto fs = parallel_map<double>(count, [&](std::size_t i) { return fn(xs[i]); });
  std::vector<std::pair<double, double>> brackets;
  for (std::size_t i = 0; i + 1 < count; ++i) {
    if (fs[i] == 0.0) {
      brackets.emplace_back(xs[i], xs[i]);
    } else if ((fs[i] > 0.0) != (fs[i + 1] > 0.0) && fs[i + 1] != 0.0) {
      brackets.emplace_back(xs[i], xs[i + 1]);
    }
  }
  return parallel_map<double>(brackets.size(), [&](std::size_t i) {
    const auto [l, h] = brackets[i];
    return l == h ? l : refine_root(fn, l, h);
  });
}

double transcendental_root(int n, B0Variant variant) {
  if (n < 1) throw DomainError("transcendental_root requires n >= 1");
  const double lo = n;
  const double hi = n + 2.0 / 3.0 - 1e-9;
  return refine_root([variant](double a) { return transcendental_fn(a, variant); }, lo, hi);
}

double approx_level(const PhysicalParams& p, int n) {
  if (n < 1) throw DomainError("level index must be >= 1");
  const double nu = n + 1.0 / 3.0;
  const double nu23 = std::cbrt(nu * nu);
  return prefactor(p) * std::sqrt(nu + (1.0 / 6.0) / nu23 - (1.0 / 20.0) / (nu23 * nu23)) +
         p.v0;
}

double semiclassical_level(const PhysicalParams& p, int n) {
  if (n < 1) throw DomainError("level index must be >= 1");
  return prefactor(p) * std::sqrt(n + 1.0 / 3.0) + p.v0;
}

std::vector<EnergyLevel> solve_levels_exact(const PhysicalParams& p, int n_max) {
  require_confining(p);
  if (n_max < 1) throw DomainError("n_max must be >= 1");
  std::vector<double> roots;
  double hi = n_max + 1.0;
  for (int attempt = 0; attempt <= kMaxExpansions; ++attempt) {
    roots = scan_roots(spectrum_fn_exact, kScanStart, hi, kScanStep);
    if (static_cast<int>(roots.size()) >= n_max) break;
    hi += 1.0;
  }
  if (static_cast<int>(roots.size()) < n_max) {
    throw RootNotFound("found only " + std::to_string(roots.size()) + " of " +
                       std::to_string(n_max) + " spectrum roots");
  }
  std::vector<EnergyLevel> levels;
  for (int n = 1; n <= n_max; ++n) {
    EnergyLevel l;
    l.n = n;
    l.a_exact = roots[n - 1];
    l.e_exact = energy_from_a(p, l.a_exact);
    l.e_approx14 = approx_level(p, n);
    l.e_semiclassical = semiclassical_level(p, n);
    levels.push_back(l);
  }
  return levels;
}

std::vector<double> default_wavefunction_grid(const PhysicalParams& p, double a_max,
                                              std::size_t points) {
  require_confining(p);
  if (points < 3) throw DomainError("wavefunction grid needs at least 3 points");
  const SpectralParams sp = spectral_params(p, p.v0);
  // Past z = sqrt(2 a_max) + 6.5 every level is below exp(-21) of its peak.
  const double z_hi = std::sqrt(2.0 * std::max(a_max, 0.0)) + 6.5;
  const double x_hi = std::pow(z_hi / std::sqrt(3.0 * sp.epsilon), 1.5);
  return linspace(1e-4 * x_hi, x_hi, points);
}

WavefunctionTable bound_state_wavefunction(const PhysicalParams& p,
                                           const EnergyLevel& level,
                                           std::span<const double> grid) {
  require_confining(p);
  if (grid.size() < 3) throw DomainError("wavefunction grid needs at least 3 points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw DomainError("wavefunction grid must be positive and increasing");
    }
  }
  const double e = level.e_exact;
  const GeneralSolution g = matched_solution(p, e);

  // The matched combination cancels exponentially past the outer turning
  // point, so continue it there with the proportional decaying solution.
  const double x_switch = turning_points(p, e).second;
  const Complex join = general_solution(g, x_switch) / decaying_solution(g.principal, x_switch);

  const auto values = parallel_map<Complex>(grid.size(), [&](std::size_t i) {
    const double x = grid[i];
    return x <= x_switch ? general_solution(g, x) : join * decaying_solution(g.principal, x);
  });

  double peak = 0.0;
  for (const auto& v : values) peak = std::max(peak, std::abs(v));
  if (!(peak > 0.0)) throw NormalizationError("bound state vanishes on the grid");

  std::size_t ref = grid.size() / 2;
  if (std::abs(values[ref]) < 1e-3 * peak) {
    // Midpoint sits on a node; any point carries the same global phase.
    ref = static_cast<std::size_t>(
        std::max_element(values.begin(), values.end(),
                         [](Complex l, Complex r) { return std::abs(l) < std::abs(r); }) -
        values.begin());
  }
  const Complex rotation = std::abs(values[ref]) / values[ref];

  WavefunctionTable t;
  t.x.assign(grid.begin(), grid.end());
  t.psi.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Complex v = rotation * values[i];
    t.psi[i] = v.real();
    t.max_imag = std::max(t.max_imag, std::abs(v.imag()));
  }
  // Sign convention: positive lobe next to the origin.
  const auto first = std::find_if(t.psi.begin(), t.psi.end(),
                                  [&](double v) { return std::abs(v) > 1e-3 * peak; });
  if (first != t.psi.end() && *first < 0.0) {
    for (auto& v : t.psi) v = -v;
  }

  const double x_end = grid.back();
  const double excess = potential_value(p, x_end) - e;
  if (!(excess > 0.0)) {
    throw NormalizationError("grid ends inside the classically allowed region");
  }
  const double kappa = std::sqrt(2.0 * p.m * excess) / p.hbar;
  constexpr double head_power = 2.0 * ratio_value<RegularExponent>() + 1.0;

  auto integral = [&](const std::vector<double>& psi, double* tail_out) {
    std::vector<double> sq(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) sq[i] = psi[i] * psi[i];
    const double head = sq.front() * grid.front() / head_power;
    const double tail = sq.back() / (2.0 * kappa);
    if (tail_out) *tail_out = tail;
    return head + simpson(grid, sq) + tail;
  };

  double tail = 0.0;
  t.raw_norm = integral(t.psi, &tail);
  t.tail_fraction = tail / t.raw_norm;
  if (t.tail_fraction > kTailTolerance) {
    throw NormalizationError("tail beyond the grid exceeds 1e-6 of the norm");
  }
  const double scale = 1.0 / std::sqrt(t.raw_norm);
  for (auto& v : t.psi) v *= scale;
  t.norm = integral(t.psi, nullptr);
  return t;
}

}  // namespace heunwell
