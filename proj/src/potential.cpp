#include "heunwell/potential.hpp"

#include <cmath>
#include <string>

#include "heunwell/errors.hpp"

namespace heunwell {

void validate(const PhysicalParams& p) {
  if (!(p.m > 0.0) || !std::isfinite(p.m)) {
    throw DomainError("mass must be positive");
  }
  if (!(p.hbar > 0.0) || !std::isfinite(p.hbar)) {
    throw DomainError("hbar must be positive");
  }
  if (!std::isfinite(p.v0) || !std::isfinite(p.v1)) {
    throw DomainError("potential strengths must be finite");
  }
}

void require_confining(const PhysicalParams& p) {
  validate(p);
  if (!(p.v1 > 0.0)) {
    throw DomainError("bound states require v1 > 0 (got " +
                      std::to_string(p.v1) + ")");
  }
}

double centrifugal_strength(const PhysicalParams& p) {
  return ratio_value<CentrifugalCoefficient>() * p.hbar * p.hbar / p.m;
}

double potential_value(const PhysicalParams& p, double x) {
  if (!(x > 0.0)) throw DomainError("potential_value: x must be positive");
  return centrifugal_strength(p) / (x * x) + p.v0 + p.v1 * std::cbrt(x * x);
}

double potential_derivative(const PhysicalParams& p, double x) {
  if (!(x > 0.0)) throw DomainError("potential_derivative: x must be positive");
  return -2.0 * centrifugal_strength(p) / (x * x * x) +
         (2.0 / 3.0) * p.v1 / std::cbrt(x);
}

double potential_minimum(const PhysicalParams& p) {
  require_confining(p);
  return std::pow(3.0 * centrifugal_strength(p) / p.v1, 3.0 / 8.0);
}

std::pair<double, double> turning_points(const PhysicalParams& p, double e) {
  const double x0 = potential_minimum(p);
  if (!(e > potential_value(p, x0))) {
    throw DomainError("turning_points: energy below the potential minimum");
  }
  auto bisect = [&](double lo, double hi) {
    // V - e changes sign on [lo, hi].
    const bool lo_above = potential_value(p, lo) > e;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      if ((potential_value(p, mid) > e) == lo_above) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  double inner = x0;
  while (potential_value(p, inner) <= e) inner *= 0.5;
  double outer = x0;
  while (potential_value(p, outer) <= e) outer *= 2.0;
  return {bisect(inner, x0), bisect(x0, outer)};
}

SpectralParams spectral_params(const PhysicalParams& p, double e) {
  require_confining(p);
  SpectralParams s;
  s.epsilon = std::sqrt(p.m * p.v1 / (2.0 * p.hbar * p.hbar));
  const double de = e - p.v0;
  const double h4 = std::pow(p.hbar, 4);
  s.a = 3.0 * p.m * p.m * de * de / (32.0 * h4 * std::pow(s.epsilon, 3));
  return s;
}

double energy_from_a(const PhysicalParams& p, double a) {
  require_confining(p);
  if (!(a >= 0.0)) throw DomainError("energy_from_a: a must be non-negative");
  const double eps = std::sqrt(p.m * p.v1 / (2.0 * p.hbar * p.hbar));
  const double h4 = std::pow(p.hbar, 4);
  return p.v0 + std::sqrt(32.0 * h4 * std::pow(eps, 3) * a / (3.0 * p.m * p.m));
}

}  // namespace heunwell
