#include "heunwell/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "heunwell/errors.hpp"

namespace heunwell {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPoleTolerance = 1e-14;
constexpr int kKummerTermBudget = 500;
constexpr double kKummerTarget = 1e-13;

// Lanczos coefficients for g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,      -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,    12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6,  1.5056327351493116e-7};

// sin(pi x) with exact zeros at the integers.
double sinpi(double x) {
  double r = std::fmod(x, 2.0);
  if (r > 1.0) {
    r -= 2.0;
  } else if (r < -1.0) {
    r += 2.0;
  }
  if (r == 0.0 || r == 1.0 || r == -1.0) return 0.0;
  if (r > 0.5) {
    r = 1.0 - r;
  } else if (r < -0.5) {
    r = -1.0 - r;
  }
  return std::sin(kPi * r);
}

double cospi(double x) { return sinpi(x + 0.5); }

Complex sinpi(Complex z) {
  const double x = z.real();
  const double y = z.imag();
  return {sinpi(x) * std::cosh(kPi * y), cospi(x) * std::sinh(kPi * y)};
}

// Gamma(z) for Re z >= 1/2. Returns the value and the relative error bound.
std::pair<Complex, double> lanczos_gamma(Complex z) {
  z -= 1.0;
  Complex series = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    series += kLanczos[i] / (z + static_cast<double>(i));
  }
  const Complex t = z + kLanczosG + 0.5;
  const Complex exponent = (z + 0.5) * std::log(t) - t;
  const Complex value = std::sqrt(2.0 * kPi) * std::exp(exponent) * series;
  const double rel = 2e-15 + 4.0 * kEps * std::abs(exponent);
  return {value, rel};
}

struct SeriesSum {
  Complex sum{1.0, 0.0};
  double tail = 0.0;
  double abs_sum = 1.0;
  int terms = 0;
};

SeriesSum taylor_1f1(Complex a, Complex b, Complex z) {
  SeriesSum s;
  if (z == Complex{}) return s;
  const double za = std::abs(z);
  const double aa = std::abs(a);
  const double ba = std::abs(b);
  Complex term{1.0, 0.0};
  bool done = false;
  for (int k = 0; k < kKummerTermBudget; ++k) {
    term *= (a + static_cast<double>(k)) / (b + static_cast<double>(k)) * z /
            static_cast<double>(k + 1);
    s.sum += term;
    const double mag = std::abs(term);
    s.abs_sum += mag;
    s.terms = k + 1;
    if (mag == 0.0) {
      s.tail = 0.0;
      done = true;
      break;
    }
    // For j >= k+1 > |b| the ratio |t_{j+1}/t_j| is bounded by
    // |z| (j + |a|) / ((j - |b|)(j + 1)), which decreases in j.
    const double j = static_cast<double>(k + 1);
    if (j > ba) {
      const double rho = za * (j + aa) / ((j - ba) * (j + 1.0));
      if (rho < 1.0) {
        s.tail = mag * rho / (1.0 - rho);
        const double rounding = 2.0 * kEps * s.abs_sum;
        if (s.tail <= std::max(0.5 * kEps * std::abs(s.sum), 0.1 * rounding)) {
          done = true;
          break;
        }
        continue;
      }
    }
    s.tail = std::numeric_limits<double>::infinity();
  }
  if (!done) {
    const double rounding = 2.0 * kEps * s.abs_sum;
    if (!(s.tail <= std::max(kKummerTarget * std::abs(s.sum), rounding))) {
      throw NoConvergence("kummer_1f1: series tail above target after " +
                          std::to_string(kKummerTermBudget) + " terms");
    }
  }
  return s;
}

// H_mu(z) for Re mu < 0 from the Laplace integral, exp-sinh trapezoid rule.
EvalResult laplace_hermite(Complex mu, Complex z) {
  const Complex power = -mu;  // exponent of t in t^(-mu-1) dt after dt = t ds'
  auto log_integrand = [&](double s) -> Complex {
    const double e = 0.5 * kPi * std::sinh(s);
    if (e > 6.5) return {-std::numeric_limits<double>::infinity(), 0.0};
    const double t = std::exp(e);
    return -t * t - 2.0 * z * t + power * e +
           std::log(0.5 * kPi * std::cosh(s));
  };
  auto integrand = [&](double s) -> Complex {
    const Complex lg = log_integrand(s);
    if (!std::isfinite(lg.real()) || lg.real() < -745.0) return {};
    return std::exp(lg);
  };

  // Locate the peak and the range where the integrand is above peak * e^-80.
  double peak = -std::numeric_limits<double>::infinity();
  for (double s = -6.0; s <= 4.0; s += 0.05) {
    peak = std::max(peak, log_integrand(s).real());
  }
  const double cutoff = peak - 80.0;
  double s_hi = 0.0;
  while (s_hi < 6.0 && !(log_integrand(s_hi).real() < cutoff &&
                         log_integrand(s_hi + 0.05).real() < cutoff &&
                         s_hi > 0.5)) {
    s_hi += 0.05;
  }
  double s_lo = 0.0;
  while (s_lo > -8.0 && !(log_integrand(s_lo).real() < cutoff &&
                          log_integrand(s_lo - 0.05).real() < cutoff &&
                          s_lo < -0.5)) {
    s_lo -= 0.05;
  }

  double h = 0.25;
  Complex sum{};
  double abs_sum = 0.0;
  int nodes = 0;
  for (long k = static_cast<long>(std::ceil(s_lo / h));
       k <= static_cast<long>(std::floor(s_hi / h)); ++k) {
    const Complex f = integrand(static_cast<double>(k) * h);
    sum += f;
    abs_sum += std::abs(f);
    ++nodes;
  }
  Complex estimate = sum * h;
  double diff = std::numeric_limits<double>::infinity();
  for (int level = 0; level < 9; ++level) {
    Complex mid{};
    const double hn = h / 2.0;
    for (long k = static_cast<long>(std::ceil((s_lo - hn) / h));
         static_cast<double>(k) * h + hn <= s_hi; ++k) {
      const double s = static_cast<double>(k) * h + hn;
      if (s < s_lo) continue;
      const Complex f = integrand(s);
      mid += f;
      abs_sum += std::abs(f);
      ++nodes;
    }
    sum += mid;
    h = hn;
    const Complex refined = sum * h;
    diff = std::abs(refined - estimate);
    estimate = refined;
    if (level >= 2 && diff <= 4.0 * kEps * std::abs(estimate)) break;
  }
  const Complex rg = recip_gamma(-mu);
  const double rounding = 4.0 * kEps * abs_sum * h;
  EvalResult r;
  r.value = estimate * rg;
  r.abs_error_estimate = std::abs(rg) * (diff + rounding) +
                         2e-15 * std::abs(r.value);
  r.terms_used = nodes;
  return r;
}

EvalResult hermite_integral_route(Complex nu, Complex z) {
  if (nu.real() < -1.0) return laplace_hermite(nu, z);
  const int steps = static_cast<int>(std::floor(nu.real())) + 2;
  Complex m = nu - static_cast<double>(steps);  // Re m in [-2, -1)
  EvalResult prev = laplace_hermite(m - 1.0, z);
  EvalResult cur = laplace_hermite(m, z);
  int nodes = prev.terms_used + cur.terms_used;
  for (int i = 0; i < steps; ++i) {
    const Complex next = 2.0 * z * cur.value - 2.0 * m * prev.value;
    const double err = 2.0 * std::abs(z) * cur.abs_error_estimate +
                       2.0 * std::abs(m) * prev.abs_error_estimate +
                       kEps * std::abs(next);
    prev = cur;
    cur.value = next;
    cur.abs_error_estimate = err;
    m += 1.0;
  }
  cur.terms_used = nodes;
  return cur;
}

}  // namespace

bool near_nonpositive_integer(Complex z) {
  if (std::abs(z.imag()) >= kPoleTolerance) return false;
  const double n = std::round(z.real());
  return n <= 0.0 && std::abs(z.real() - n) < kPoleTolerance;
}

EvalResult gamma(Complex z) {
  if (near_nonpositive_integer(z)) {
    throw PoleError("gamma: argument is a pole (" + std::to_string(z.real()) +
                    ")");
  }
  EvalResult r;
  r.terms_used = static_cast<int>(kLanczos.size());
  if (z.real() < 0.5) {
    auto [g, rel] = lanczos_gamma(1.0 - z);
    const Complex s = sinpi(z);
    r.value = kPi / (s * g);
    r.abs_error_estimate = std::abs(r.value) * (rel + 4.0 * kEps);
  } else {
    auto [g, rel] = lanczos_gamma(z);
    r.value = g;
    r.abs_error_estimate = std::abs(g) * rel;
  }
  return r;
}

Complex recip_gamma(Complex z) {
  if (near_nonpositive_integer(z)) return {};
  if (z.real() < 0.5) {
    // 1/Gamma(z) = sin(pi z) Gamma(1 - z) / pi, finite everywhere.
    auto [g, rel] = lanczos_gamma(1.0 - z);
    (void)rel;
    return sinpi(z) * g / kPi;
  }
  return 1.0 / lanczos_gamma(z).first;
}

EvalResult kummer_1f1(Complex a, Complex b, Complex z) {
  if (near_nonpositive_integer(b)) {
    throw DegenerateB("kummer_1f1: b is a non-positive integer");
  }
  EvalResult r;
  if (z.real() < 0.0) {
    const SeriesSum s = taylor_1f1(b - a, b, -z);
    const Complex scale = std::exp(z);
    r.value = scale * s.sum;
    r.abs_error_estimate =
        std::abs(scale) * (s.tail + 2.0 * kEps * s.abs_sum) +
        kEps * std::abs(r.value) * (1.0 + std::abs(z));
    r.terms_used = s.terms;
  } else {
    const SeriesSum s = taylor_1f1(a, b, z);
    r.value = s.sum;
    r.abs_error_estimate = s.tail + 2.0 * kEps * s.abs_sum;
    r.terms_used = s.terms;
  }
  return r;
}

EvalResult hermite_nu_kummer(Complex order, Complex z) {
  const Complex prefactor =
      std::sqrt(kPi) * std::exp(order * std::numbers::ln2);
  const Complex z2 = z * z;
  const Complex g_even = recip_gamma((1.0 - order) / 2.0);
  const Complex g_odd = recip_gamma(-order / 2.0);

  Complex even{};
  Complex odd{};
  double err = 0.0;
  int terms = 0;
  if (g_even != Complex{}) {
    const EvalResult f = kummer_1f1(-order / 2.0, 0.5, z2);
    even = f.value * g_even;
    err += std::abs(g_even) * f.abs_error_estimate + 2e-15 * std::abs(even);
    terms += f.terms_used;
  }
  if (g_odd != Complex{} && z != Complex{}) {
    const EvalResult f = kummer_1f1((1.0 - order) / 2.0, 1.5, z2);
    odd = 2.0 * z * f.value * g_odd;
    err += std::abs(2.0 * z * g_odd) * f.abs_error_estimate +
           2e-15 * std::abs(odd);
    terms += f.terms_used;
  }
  EvalResult r;
  r.value = prefactor * (even - odd);
  r.abs_error_estimate =
      std::abs(prefactor) * err +
      kEps * std::abs(r.value) * (2.0 + std::abs(order));
  r.terms_used = terms;
  return r;
}

EvalResult hermite_nu(Complex order, Complex z) {
  if (z.real() <= 0.0) return hermite_nu_kummer(order, z);
  EvalResult kummer;
  bool have_kummer = false;
  try {
    kummer = hermite_nu_kummer(order, z);
    have_kummer = true;
    if (kummer.abs_error_estimate <= 64.0 * kEps * std::abs(kummer.value)) {
      return kummer;
    }
  } catch (const NoConvergence&) {
  }
  EvalResult integral = hermite_integral_route(order, z);
  if (have_kummer && kummer.abs_error_estimate < integral.abs_error_estimate) {
    return kummer;
  }
  return integral;
}

EvalResult hermite_nu_derivative(Complex order, Complex z) {
  if (order == Complex{}) return {};
  EvalResult h = hermite_nu(order - 1.0, z);
  h.value *= 2.0 * order;
  h.abs_error_estimate *= 2.0 * std::abs(order);
  return h;
}

}  // namespace heunwell
