#pragma once

#include <functional>
#include <vector>

#include "heunwell/potential.hpp"
#include "heunwell/specfun.hpp"

namespace heunwell {

enum class Boundary { DirichletBoth };

struct OracleConfig {
  double x_min = 1e-4;
  /// <= 0 selects x_max automatically from the highest requested level.
  double x_max = 0.0;
  int n_grid = 4000;
  Boundary boundary = Boundary::DirichletBoth;
};

/// Half-line problem psi'' = (2m/hbar^2)(V(x) - E) psi with psi ~ x^s at 0.
struct ShootingProblem {
  std::function<double(double)> potential;
  double m = 1.0;
  double hbar = 1.0;
  double regular_exponent = ratio_value<RegularExponent>();
};

ShootingProblem shooting_problem(const PhysicalParams& p);

struct OracleResult {
  std::vector<double> energies;  // Richardson-extrapolated
  std::vector<double> drift;     // |E(2N) - E(N)| / |E(2N)| per level
  double x_max = 0.0;
};

struct Eigenfunction {
  std::vector<double> x;
  std::vector<double> psi;
};

/// Shooting with Numerov steps in t = ln x (psi = sqrt(x) phi keeps the
/// equation free of first derivatives). Levels are bracketed by node count
/// and refined by bisection on the Wronskian of the outward and inward
/// solutions at the outer turning point. The grid is doubled once; a
/// relative shift above 1e-6 throws NotConverged.
OracleResult numerov_solve(const ShootingProblem& problem, const OracleConfig& cfg,
                           int n_max);

std::vector<double> numerov_eigenvalues(const PhysicalParams& p, const OracleConfig& cfg,
                                        int n_max);

/// Stitched outward/inward solution at a converged energy, unit L2 norm.
Eigenfunction numerov_eigenfunction(const ShootingProblem& problem,
                                    const OracleConfig& cfg, double energy);

/// Plain Taylor partial sum of 1F1 in long double with a ratio tail bound.
/// Test reference only. TailNotSmall if the bound exceeds 1e-12 relative.
EvalResult kummer_series_reference(Complex a, Complex b, Complex z, int terms);

}  // namespace heunwell
