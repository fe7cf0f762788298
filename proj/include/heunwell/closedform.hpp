#pragma once

#include <optional>
#include <span>

#include "heunwell/potential.hpp"
#include "heunwell/specfun.hpp"

namespace heunwell {

enum class Branch { Principal, Mirror };

/// Everything needed to evaluate one fundamental solution at a fixed energy.
/// Mirror applies epsilon -> -epsilon, a -> -a with principal square roots.
struct SolutionContext {
  PhysicalParams params;
  double energy = 0.0;
  SpectralParams spectral;
  Branch branch = Branch::Principal;
};

/// Requires v1 > 0 and energy >= v0.
SolutionContext make_context(const PhysicalParams& p, double energy,
                             Branch branch = Branch::Principal);

/// psi = c1 psi_F + c2 psi_F|mirror.
struct GeneralSolution {
  Complex c1{1.0, 0.0};
  Complex c2{0.0, 0.0};
  SolutionContext principal;
  SolutionContext mirror;
};

GeneralSolution make_general_solution(const PhysicalParams& p, double energy,
                                      Complex c1, Complex c2);

/// c1 = 1, c2 from boundary_coefficient_ratio(): the solution regular at 0.
GeneralSolution matched_solution(const PhysicalParams& p, double energy);

/// psi and its first two x-derivatives.
struct Jet {
  Complex value{};
  Complex first{};
  Complex second{};
};

/// z = sqrt(3 epsilon) x^(2/3); on the mirror branch sqrt(-3 epsilon) x^(2/3).
Complex z_of_x(const SpectralParams& s, double x, Branch branch = Branch::Principal);

Complex fundamental_solution(const SolutionContext& ctx, double x);
Jet fundamental_solution_jet(const SolutionContext& ctx, double x);

/// The same solution assembled from the two-Kummer form of every H_nu.
Complex fundamental_solution_kummer(const SolutionContext& ctx, double x);

/// Solution obtained by replacing H_nu(w) with exp(i pi nu) H_nu(-w).
/// It is the solution decaying as x -> infinity; at a root of the spectrum
/// condition it is proportional to the matched solution.
Complex decaying_solution(const SolutionContext& ctx, double x);
Jet decaying_solution_jet(const SolutionContext& ctx, double x);

Complex general_solution(const GeneralSolution& g, double x);
Jet general_solution_jet(const GeneralSolution& g, double x);

/// C2/C1 making the general solution vanish at the origin. Only the
/// spectral parameters of ctx are used. DenominatorZero if |den| < 1e-14.
Complex boundary_coefficient_ratio(const SolutionContext& ctx);

/// max over grid of |psi'' + (2m/hbar^2)(E - V) psi| divided by the largest of 1, |psi''|,
/// (2m/hbar^2)(|E| + |V|)|psi| (the sizes of the terms being cancelled).
/// `energy` overrides the energy used in the equation (not in psi).
double ode_residual(const GeneralSolution& g, std::span<const double> grid,
                    std::optional<double> energy = std::nullopt);

/// W = psi1 psi2' - psi1' psi2 of two fundamental solutions at x.
Complex wronskian(const SolutionContext& first, const SolutionContext& second,
                  double x);

}  // namespace heunwell
