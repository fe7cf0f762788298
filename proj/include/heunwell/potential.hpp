#pragma once

#include <ratio>
#include <utility>

namespace heunwell {

/// One problem instance: V(x) = 91 hbar^2 / (72 m x^2) + v0 + v1 x^(2/3).
struct PhysicalParams {
  double m = 1.0;
  double hbar = 1.0;
  double v0 = 0.0;
  double v1 = 1.0;
};

/// epsilon = sqrt(m v1 / (2 hbar^2)) and a = 3 m^2 (E - v0)^2 / (32 hbar^4 epsilon^3).
struct SpectralParams {
  double epsilon = 0.0;
  double a = 0.0;
};

// The centrifugal coefficient is the integrability condition; keep it exact.
using CentrifugalCoefficient = std::ratio<91, 72>;
using EffectiveAngularMomentum = std::ratio<7, 6>;
using MaslovIndex = std::ratio<1, 3>;
// Regular solution behaves as x^(l + 1) at the origin.
using RegularExponent = std::ratio_add<EffectiveAngularMomentum, std::ratio<1>>;

static_assert(std::ratio_equal_v<
              std::ratio_multiply<EffectiveAngularMomentum,
                                  std::ratio_add<EffectiveAngularMomentum,
                                                 std::ratio<1>>>,
              std::ratio_multiply<CentrifugalCoefficient, std::ratio<2>>>);
static_assert(std::ratio_equal_v<
              std::ratio_divide<std::ratio_subtract<
                                    std::ratio_multiply<std::ratio<2>,
                                                        EffectiveAngularMomentum>,
                                    std::ratio<1>>,
                                std::ratio<4>>,
              MaslovIndex>);

template <typename R>
constexpr double ratio_value() {
  return static_cast<double>(R::num) / static_cast<double>(R::den);
}

/// Throws DomainError unless m > 0 and hbar > 0.
void validate(const PhysicalParams& p);

/// validate() plus v1 > 0, required by every bound-state operation.
void require_confining(const PhysicalParams& p);

/// 91 hbar^2 / (72 m).
double centrifugal_strength(const PhysicalParams& p);

/// V(x); DomainError for x <= 0.
double potential_value(const PhysicalParams& p, double x);

/// dV/dx.
double potential_derivative(const PhysicalParams& p, double x);

/// Location of the minimum of V for v1 > 0: x = (3 V_cf / v1)^(3/8).
double potential_minimum(const PhysicalParams& p);

/// Inner and outer classical turning points for energy e above the minimum.
std::pair<double, double> turning_points(const PhysicalParams& p, double e);

SpectralParams spectral_params(const PhysicalParams& p, double e);

/// Inverse of spectral_params() on the e >= v0 branch.
double energy_from_a(const PhysicalParams& p, double a);

}  // namespace heunwell
