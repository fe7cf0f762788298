#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "heunwell/errors.hpp"
#include "heunwell/numerics.hpp"
#include "heunwell/oracle.hpp"
#include "heunwell/spectrum.hpp"

using namespace heunwell;

namespace {
double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }
}  // namespace

TEST_CASE("half oscillator self-test") {
  // psi'' + 2(E - x^2) psi = 0 with psi(0) = 0 keeps the odd oscillator
  // states of frequency sqrt(2): E_k = sqrt(2) (2k + 3/2).
  ShootingProblem prob;
  prob.potential = [](double x) { return x * x; };
  prob.regular_exponent = 1.0;
  OracleConfig cfg;
  const auto r = numerov_solve(prob, cfg, 6);
  REQUIRE(r.energies.size() == 6);
  for (int k = 0; k < 6; ++k) {
    CHECK(rel(r.energies[k], std::numbers::sqrt2 * (2.0 * k + 1.5)) < 1e-7);
    CHECK(r.drift[k] <= 1e-6);
  }
}

TEST_CASE("oracle agrees with the closed-form spectrum") {
  for (const PhysicalParams& p : {PhysicalParams{1.0, 1.0, 0.0, 1.0},
                                  PhysicalParams{1.0, 1.0, 0.0, 2.0},
                                  PhysicalParams{1.0, 1.0, 3.0, 1.0}}) {
    const auto oracle = numerov_eigenvalues(p, OracleConfig{}, 5);
    const auto exact = solve_levels_exact(p, 5);
    REQUIRE(oracle.size() == 5);
    for (int k = 0; k < 5; ++k) CHECK(rel(oracle[k], exact[k].e_exact) <= 1e-6);
  }
}

TEST_CASE("v0 shifts every eigenvalue") {
  const auto base = numerov_eigenvalues(PhysicalParams{}, OracleConfig{}, 5);
  const auto up = numerov_eigenvalues({1.0, 1.0, 2.0, 1.0}, OracleConfig{}, 5);
  for (int k = 0; k < 5; ++k) CHECK(std::abs(up[k] - base[k] - 2.0) <= 1e-9);
}

TEST_CASE("grid convergence and eigenfunction nodes") {
  const PhysicalParams p;
  const auto prob = shooting_problem(p);
  const auto r = numerov_solve(prob, OracleConfig{}, 5);
  CHECK(r.x_max > turning_points(p, r.energies.back()).second);
  OracleConfig cfg;
  cfg.x_max = r.x_max;
  for (int k = 0; k < 5; ++k) {
    CHECK(r.drift[k] <= 1e-6);
    const auto f = numerov_eigenfunction(prob, cfg, r.energies[k]);
    double peak = 0.0;
    for (double v : f.psi) peak = std::max(peak, std::abs(v));
    CHECK(count_sign_changes(f.psi, 1e-6 * peak) == k);
    std::vector<double> sq(f.psi.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = f.psi[i] * f.psi[i];
    CHECK(std::abs(simpson(f.x, sq) - 1.0) < 1e-8);
  }
}

TEST_CASE("oracle eigenfunctions match the closed form") {
  const PhysicalParams p;
  const auto levels = solve_levels_exact(p, 3);
  const auto prob = shooting_problem(p);
  OracleConfig cfg;
  cfg.x_max = 12.0;
  for (const auto& lv : levels) {
    const auto f = numerov_eigenfunction(prob, cfg, lv.e_exact);
    const auto t = bound_state_wavefunction(p, lv, f.x);
    double worst = 0.0;
    double sign = 0.0;
    for (std::size_t i = 0; i < f.x.size(); ++i) {
      if (sign == 0.0 && std::abs(t.psi[i]) > 0.1) sign = (t.psi[i] > 0) == (f.psi[i] > 0) ? 1 : -1;
    }
    for (std::size_t i = 0; i < f.x.size(); ++i) {
      worst = std::max(worst, std::abs(sign * f.psi[i] - t.psi[i]));
    }
    CHECK(worst < 1e-3);
  }
}

TEST_CASE("oracle preconditions") {
  const PhysicalParams p;
  OracleConfig cfg;
  cfg.n_grid = 1000;
  CHECK_THROWS_AS(numerov_eigenvalues(p, cfg, 3), DomainError);
  CHECK_THROWS_AS(numerov_eigenvalues(p, OracleConfig{}, 0), DomainError);
  CHECK_THROWS_AS(numerov_eigenvalues({1.0, 1.0, 0.0, 0.0}, OracleConfig{}, 3), DomainError);
  OracleConfig neg;
  neg.x_min = -1.0;
  CHECK_THROWS_AS(numerov_eigenvalues(p, neg, 3), DomainError);
  CHECK_THROWS_AS(numerov_eigenfunction(shooting_problem(p), OracleConfig{}, 2.3), DomainError);
}

TEST_CASE("reference Kummer series") {
  CHECK(std::abs(kummer_series_reference(1.0, 1.0, 1.0, 100).value - std::numbers::e) < 1e-14);
  CHECK(kummer_series_reference(Complex(0.3, 2.0), 1.7, 0.0, 5).value == Complex(1.0));
  const Complex want = kummer_1f1(-0.75, 0.5, 2.0).value;
  CHECK(std::abs(kummer_series_reference(-0.75, 0.5, 2.0, 500).value - want) <=
        1e-12 * std::abs(want));
  CHECK_THROWS_AS(kummer_series_reference(1.0, 1.0, 50.0, 10), TailNotSmall);
  CHECK_THROWS_AS(kummer_series_reference(1.0, -2.0, 1.0, 10), DegenerateB);
  CHECK_THROWS_AS(kummer_series_reference(1.0, 1.0, 1.0, 2001), DomainError);
}
