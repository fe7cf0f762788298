#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "heunwell/closedform.hpp"
#include "heunwell/errors.hpp"
#include "heunwell/numerics.hpp"
#include "heunwell/spectrum.hpp"

using namespace heunwell;

namespace {

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

// Reference roots and energies for m = hbar = 1, v0 = 0, v1 = 1, frozen from an
// independent arbitrary-precision root solve.
constexpr double kRoots[] = {1.4372765424581849, 2.4124796869343437, 3.3986648250934494,
                             4.3896723383148836, 5.383269619462922,  6.3784361684019864,
                             7.374633795138914,  8.3715494867296978, 9.3689877079944055,
                             10.366819457267564};
constexpr double kEnergies[] = {2.3281557675408088, 3.0162941908738046, 3.5801072198497218,
                                4.0687210620272068, 4.5057275863077548};

}  // namespace

TEST_CASE("spectrum functions at reference points") {
  CHECK(rel(spectrum_fn_exact(2.0), -42.28581192241077786) < 1e-12);
  CHECK(rel(spectrum_fn_equivalent(2.0), 42.28581192241077786) < 1e-12);
  CHECK(std::abs(spectrum_fn_exact(0.5)) < 1e-13);
  for (double a = 0.6; a < 10.0; a += 0.173) {
    const double f9 = spectrum_fn_exact(a), f10 = spectrum_fn_equivalent(a);
    CHECK(std::abs(f9 + f10) <= 1e-10 * std::max(1.0, std::abs(f9)));
  }
}

TEST_CASE("auxiliary function") {
  CHECK(std::abs(auxiliary_F(1.5) + 0.25) < 1e-13);
  CHECK(rel(auxiliary_F(2.7), 4.110169997646195934) < 1e-12);
  for (double a : kRoots) CHECK(std::abs(auxiliary_F(a)) < 1e-10);
}

TEST_CASE("B0 and the transcendental approximation") {
  CHECK(rel(b0(), 0.2286201940330747245) < 1e-14);
  CHECK(b0(B0Variant::Rounded) == 0.2);
  const double exact_roots[] = {1.445124349090445878, 2.419318242549906777,
                                3.404663055679005824};
  const double rounded_roots[] = {1.434937907671641927, 2.410620009503557905,
                                  3.397081000688403174};
  for (int n = 1; n <= 3; ++n) {
    CHECK(rel(transcendental_root(n, B0Variant::Exact), exact_roots[n - 1]) < 1e-12);
    CHECK(rel(transcendental_root(n, B0Variant::Rounded), rounded_roots[n - 1]) < 1e-12);
    CHECK(std::abs(approx_F(exact_roots[n - 1])) < 1e-12);
  }
  for (int n = 2; n <= 12; ++n) {
    CHECK(std::abs(transcendental_root(n) - (n + 1.0 / 3.0)) < 0.1);
  }
  CHECK_THROWS_AS(approx_F(2.0 / 3.0), DenominatorZero);
  CHECK_THROWS_AS(approx_F(5.0 / 3.0), DenominatorZero);
}

TEST_CASE("root utilities") {
  auto c = [](double x) { return std::cos(x); };
  const auto roots = scan_roots(c, 0.0, 10.0, 0.05);
  REQUIRE(roots.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(roots[k] - (k + 0.5) * std::numbers::pi) < 1e-14);
  CHECK(std::abs(refine_root([](double x) { return x * x - 2.0; }, 1.0, 2.0) - std::sqrt(2.0)) <
        1e-15);
}

TEST_CASE("exact levels for the default preset") {
  const auto levels = solve_levels_exact(PhysicalParams{}, 10);
  REQUIRE(levels.size() == 10);
  for (int i = 0; i < 10; ++i) {
    CHECK(levels[i].n == i + 1);
    CHECK(std::abs(levels[i].a_exact - kRoots[i]) < 1e-12);
    if (i < 5) CHECK(rel(levels[i].e_exact, kEnergies[i]) < 1e-13);
    CHECK(levels[i].a_exact > i + 1);
    CHECK(levels[i].a_exact < i + 2);
    if (i > 0) CHECK(levels[i].e_exact > levels[i - 1].e_exact);
    CHECK(std::abs(spectrum_fn_exact(levels[i].a_exact)) <
          1e-12 * std::abs(spectrum_fn_exact(levels[i].a_exact + 0.01)) * 100);
  }
  CHECK(std::abs(levels[0].a_exact - 1.5) < 0.1);
  for (int i = 2; i < 10; ++i) {
    CHECK(std::abs(levels[i].a_exact - (i + 1 + 1.0 / 3.0)) <
          std::abs(levels[i - 1].a_exact - (i + 1.0 / 3.0)));
  }
  CHECK_THROWS_AS(solve_levels_exact(PhysicalParams{}, 0), DomainError);
  CHECK_THROWS_AS(solve_levels_exact({1.0, 1.0, 0.0, -1.0}, 3), DomainError);
}

TEST_CASE("roots of both spectrum forms coincide") {
  const auto r9 = scan_roots(spectrum_fn_exact, 0.6, 10.0, 0.05);
  const auto r10 = scan_roots(spectrum_fn_equivalent, 0.6, 10.0, 0.05);
  REQUIRE(r9.size() == r10.size());
  REQUIRE(r9.size() == 9);
  for (std::size_t i = 0; i < r9.size(); ++i) CHECK(std::abs(r9[i] - r10[i]) < 1e-10);
}

TEST_CASE("approximate and semiclassical levels") {
  const PhysicalParams p;
  CHECK(rel(approx_level(p, 1), 2.32780430232279) < 1e-12);
  CHECK(rel(semiclassical_level(p, 1), 2.24239044067657) < 1e-12);
  const auto levels = solve_levels_exact(p, 8);
  CHECK(std::abs(levels[0].rel_err_approx14() + 1.5096e-4) < 1e-7);
  double prev = 1.0;
  for (const auto& lv : levels) {
    CHECK(rel(lv.e_approx14, approx_level(p, lv.n)) < 1e-15);
    CHECK(std::abs(lv.rel_err_semiclassical()) < prev);
    prev = std::abs(lv.rel_err_semiclassical());
    CHECK(std::abs(lv.rel_err_approx14()) * 30.0 < std::abs(lv.rel_err_semiclassical()));
  }
  const PhysicalParams shifted{1.0, 1.0, 2.5, 1.0};
  CHECK(rel(approx_level(shifted, 3), approx_level(p, 3) + 2.5) < 1e-15);
  CHECK(rel(semiclassical_level(shifted, 3), semiclassical_level(p, 3) + 2.5) < 1e-15);
}

TEST_CASE("energies scale as v1^(3/4) and shift with v0") {
  const auto base = solve_levels_exact(PhysicalParams{}, 5);
  for (double v1 : {2.0, 4.0}) {
    const auto lv = solve_levels_exact({1.0, 1.0, 0.0, v1}, 5);
    for (int i = 0; i < 5; ++i) {
      CHECK(rel(lv[i].e_exact, base[i].e_exact * std::pow(v1, 0.75)) < 1e-8);
      CHECK(std::abs(lv[i].a_exact - base[i].a_exact) < 1e-12);
    }
  }
  const auto up = solve_levels_exact({1.0, 1.0, 3.0, 1.0}, 5);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(up[i].e_exact - base[i].e_exact - 3.0) < 1e-12);
}

TEST_CASE("bound-state wavefunctions") {
  const PhysicalParams p;
  const auto levels = solve_levels_exact(p, 5);
  const auto grid = default_wavefunction_grid(p, levels.back().a_exact);
  std::vector<WavefunctionTable> tables;
  for (const auto& lv : levels) tables.push_back(bound_state_wavefunction(p, lv, grid));

  for (std::size_t k = 0; k < tables.size(); ++k) {
    const auto& t = tables[k];
    CAPTURE(k);
    CHECK(std::abs(t.norm - 1.0) <= 1e-6);
    CHECK(t.tail_fraction <= 1e-6);
    CHECK(t.max_imag <= 1e-8);
    double peak = 0.0;
    for (double v : t.psi) peak = std::max(peak, std::abs(v));
    CHECK(count_sign_changes(t.psi, 1e-8 * peak) == int(k));
    // independent normalization check with the plain trapezoid rule
    double trap = 0.0;
    for (std::size_t i = 1; i < t.x.size(); ++i) {
      trap += 0.5 * (t.x[i] - t.x[i - 1]) * (t.psi[i] * t.psi[i] + t.psi[i - 1] * t.psi[i - 1]);
    }
    CHECK(std::abs(trap - 1.0) < 1e-3);
  }
  for (std::size_t i = 0; i < tables.size(); ++i) {
    for (std::size_t j = i + 1; j < tables.size(); ++j) {
      std::vector<double> prod(grid.size());
      for (std::size_t k = 0; k < grid.size(); ++k) prod[k] = tables[i].psi[k] * tables[j].psi[k];
      CHECK(std::abs(simpson(grid, prod)) <= 1e-6);
    }
  }
}

TEST_CASE("wavefunction near the origin and under refinement") {
  const PhysicalParams p;
  const auto levels = solve_levels_exact(p, 3);
  const auto coarse = default_wavefunction_grid(p, levels.back().a_exact, 1201);
  const auto fine = default_wavefunction_grid(p, levels.back().a_exact, 3601);
  for (const auto& lv : levels) {
    const auto a = bound_state_wavefunction(p, lv, coarse);
    const auto b = bound_state_wavefunction(p, lv, fine);
    CHECK(std::abs(a.raw_norm / b.raw_norm - 1.0) < 1e-9);
    // same sign convention, same samples at the shared points
    for (std::size_t i = 0; i < coarse.size(); i += 100) {
      CHECK(std::abs(a.psi[i] - b.psi[3 * i]) < 1e-8);
    }
    const auto xs = geomspace(1e-3, 1e-2, 20);
    std::vector<double> x(xs.begin(), xs.end());
    const auto g = matched_solution(p, lv.e_exact);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double xi : x) {
      const double lx = std::log(xi), ly = std::log(std::abs(general_solution(g, xi)));
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    const double n = double(x.size());
    CHECK(std::abs((n * sxy - sx * sy) / (n * sxx - sx * sx) - 13.0 / 6.0) <= 0.02);
  }
}

TEST_CASE("first lobe is positive and a short grid is rejected") {
  const PhysicalParams p;
  const auto levels = solve_levels_exact(p, 3);
  const auto grid = default_wavefunction_grid(p, levels.back().a_exact);
  for (const auto& lv : levels) {
    const auto t = bound_state_wavefunction(p, lv, grid);
    double peak = 0.0;
    for (double v : t.psi) peak = std::max(peak, std::abs(v));
    const auto first = std::find_if(t.psi.begin(), t.psi.end(),
                                    [&](double v) { return std::abs(v) > 1e-3 * peak; });
    REQUIRE(first != t.psi.end());
    CHECK(*first > 0.0);
  }
  const auto short_grid = linspace(0.01, 2.0, 200);
  CHECK_THROWS_AS(bound_state_wavefunction(p, levels[2], short_grid), NormalizationError);
}
