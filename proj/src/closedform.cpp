#include "heunwell/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "heunwell/errors.hpp"

namespace heunwell {

namespace {

constexpr double kLogSpaceThreshold = 50.0;

struct BranchConstants {
  Complex s;   // sqrt(+-2a)
  Complex c;   // sqrt(+-3 epsilon)
  Complex nu;  // +-a + 1/2
};

BranchConstants constants(const SpectralParams& sp, Branch branch) {
  if (branch == Branch::Principal) {
    return {Complex(std::sqrt(2.0 * sp.a)), Complex(std::sqrt(3.0 * sp.epsilon)),
            Complex(sp.a + 0.5)};
  }
  return {std::sqrt(Complex(-2.0 * sp.a)), std::sqrt(Complex(-3.0 * sp.epsilon)),
          Complex(-sp.a + 0.5)};
}

enum class Family { Hermite, Reflected, Kummer };

// H_(nu+k)(w) for k = -2..1; the reflected family uses
// exp(i pi k) H_(nu+k)(-w), which obeys the same ladder relations in w.
struct Ladder {
  Complex m2, m1, p0, p1;
};

Complex family_value(Family f, Complex order, Complex w, int k) {
  switch (f) {
    case Family::Hermite:
      return hermite_nu(order, w).value;
    case Family::Kummer:
      return hermite_nu_kummer(order, w).value;
    case Family::Reflected: {
      const Complex v = hermite_nu(order, -w).value;
      return (k % 2 == 0) ? v : -v;
    }
  }
  return {};
}

Ladder ladder(Family f, Complex nu, Complex w, bool with_lower) {
  Ladder l;
  l.p0 = family_value(f, nu, w, 0);
  l.p1 = family_value(f, nu + 1.0, w, 1);
  if (with_lower) {
    l.m1 = family_value(f, nu - 1.0, w, -1);
    l.m2 = family_value(f, nu - 2.0, w, -2);
  }
  return l;
}

void require_positive_x(double x) {
  if (!(x > 0.0)) throw DomainError("x must be positive");
}

Jet assemble(const SolutionContext& ctx, double x, Family family, bool with_derivs) {
  require_positive_x(x);
  const auto [s, c, nu] = constants(ctx.spectral, ctx.branch);
  const double x23 = std::cbrt(x * x);
  const Complex z = c * x23;
  const Complex w = s - z;
  const Ladder h = ladder(family, nu, w, with_derivs);

  const Complex z2 = z * z;
  const Complex A = s - 2.0 * s * z2 - 3.0 * z + 2.0 * z2 * z;
  const Complex B = 1.0 - z2;
  const Complex u = A * h.p0 - B * h.p1;

  // Common factor x^(-7/6) exp(-w^2/2); in log space for large a.
  const Complex log_factor = -0.5 * w * w - (7.0 / 6.0) * std::log(x);
  const bool log_space = ctx.spectral.a > kLogSpaceThreshold;
  const Complex factor = log_space ? Complex{} : std::exp(log_factor);
  auto scaled = [&](Complex bracket) -> Complex {
    if (!log_space) return factor * bracket;
    if (bracket == Complex{}) return {};
    return std::exp(log_factor + std::log(bracket));
  };

  Jet jet;
  jet.value = scaled(u);
  if (!with_derivs) return jet;

  const Complex dA = -4.0 * s * z - 3.0 + 6.0 * z2;
  const Complex d2A = -4.0 * s + 12.0 * z;
  const Complex dB = -2.0 * z;
  const Complex d2B = -2.0;
  const Complex uz = dA * h.p0 - 2.0 * nu * A * h.m1 - dB * h.p1 +
                     2.0 * (nu + 1.0) * B * h.p0;
  const Complex uzz = d2A * h.p0 - 4.0 * nu * dA * h.m1 +
                      4.0 * nu * (nu - 1.0) * A * h.m2 - d2B * h.p1 +
                      4.0 * (nu + 1.0) * dB * h.p0 - 4.0 * nu * (nu + 1.0) * B * h.m1;

  // f(z) = exp(-w^2/2) u; brackets of f_z and f_zz without the exponential.
  const Complex fz = w * u + uz;
  const Complex fzz = (w * w - 1.0) * u + 2.0 * w * uz + uzz;
  const Complex dz = (2.0 / 3.0) * c * x23 / x;            // dz/dx
  const Complex d2z = -(2.0 / 9.0) * c * x23 / (x * x);    // d2z/dx2

  jet.first = scaled(-(7.0 / 6.0) * u / x + dz * fz);
  jet.second = scaled((91.0 / 36.0) * u / (x * x) - (7.0 / 3.0) * dz * fz / x +
                      dz * dz * fzz + d2z * fz);
  return jet;
}

}  // namespace

SolutionContext make_context(const PhysicalParams& p, double energy, Branch branch) {
  require_confining(p);
  if (!(energy >= p.v0)) throw DomainError("fundamental solution requires E >= v0");
  return {p, energy, spectral_params(p, energy), branch};
}

GeneralSolution make_general_solution(const PhysicalParams& p, double energy,
                                      Complex c1, Complex c2) {
  return {c1, c2, make_context(p, energy, Branch::Principal),
          make_context(p, energy, Branch::Mirror)};
}

GeneralSolution matched_solution(const PhysicalParams& p, double energy) {
  GeneralSolution g = make_general_solution(p, energy, 1.0, 0.0);
  g.c2 = boundary_coefficient_ratio(g.principal);
  return g;
}

Complex z_of_x(const SpectralParams& s, double x, Branch branch) {
  require_positive_x(x);
  return constants(s, branch).c * std::cbrt(x * x);
}

Complex fundamental_solution(const SolutionContext& ctx, double x) {
  return assemble(ctx, x, Family::Hermite, false).value;
}

Jet fundamental_solution_jet(const SolutionContext& ctx, double x) {
  return assemble(ctx, x, Family::Hermite, true);
}

Complex fundamental_solution_kummer(const SolutionContext& ctx, double x) {
  return assemble(ctx, x, Family::Kummer, false).value;
}

Complex decaying_solution(const SolutionContext& ctx, double x) {
  return assemble(ctx, x, Family::Reflected, false).value;
}

Jet decaying_solution_jet(const SolutionContext& ctx, double x) {
  return assemble(ctx, x, Family::Reflected, true);
}

Complex general_solution(const GeneralSolution& g, double x) {
  require_positive_x(x);
  Complex out{};
  if (g.c1 != Complex{}) out += g.c1 * fundamental_solution(g.principal, x);
  if (g.c2 != Complex{}) out += g.c2 * fundamental_solution(g.mirror, x);
  return out;
}

Jet general_solution_jet(const GeneralSolution& g, double x) {
  require_positive_x(x);
  Jet out;
  for (const auto& [coef, ctx] : {std::pair{g.c1, &g.principal}, std::pair{g.c2, &g.mirror}}) {
    if (coef == Complex{}) continue;
    const Jet j = fundamental_solution_jet(*ctx, x);
    out.value += coef * j.value;
    out.first += coef * j.first;
    out.second += coef * j.second;
  }
  return out;
}

Complex boundary_coefficient_ratio(const SolutionContext& ctx) {
  const double a = ctx.spectral.a;
  if (!(a > 0.0)) throw DomainError("boundary_coefficient_ratio requires a > 0");
  const Complex s(std::sqrt(2.0 * a));
  const Complex sm = std::sqrt(Complex(-2.0 * a));
  const Complex num = s * hermite_nu(a + 0.5, s).value - hermite_nu(a + 1.5, s).value;
  const Complex den =
      sm * hermite_nu(-a + 0.5, sm).value - hermite_nu(-a + 1.5, sm).value;
  if (std::abs(den) < 1e-14) {
    throw DenominatorZero("boundary coefficient denominator vanishes");
  }
  return -std::exp(-2.0 * a) * num / den;
}

double ode_residual(const GeneralSolution& g, std::span<const double> grid,
                    std::optional<double> energy) {
  if (grid.size() < 3) throw DomainError("ode_residual needs at least 3 grid points");
  const PhysicalParams& p = g.principal.params;
  const double e = energy.value_or(g.principal.energy);
  const double k = 2.0 * p.m / (p.hbar * p.hbar);
  double worst = 0.0;
  for (double x : grid) {
    require_positive_x(x);
    const Jet j = general_solution_jet(g, x);
    const double v = potential_value(p, x);
    const Complex kpsi = k * (e - v) * j.value;
    // size of the largest term in psi'' + k E psi - k V psi
    const double scale =
        std::max({1.0, std::abs(j.second), k * (std::abs(e) + std::abs(v)) * std::abs(j.value)});
    worst = std::max(worst, std::abs(j.second + kpsi) / scale);
  }
  return worst;
}

Complex wronskian(const SolutionContext& first, const SolutionContext& second, double x) {
  const Jet a = fundamental_solution_jet(first, x);
  const Jet b = fundamental_solution_jet(second, x);
  return a.value * b.first - a.first * b.value;
}

}  // namespace heunwell
