#include "heunwell/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "heunwell/errors.hpp"

namespace heunwell {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  if (n > 1) out.back() = hi;
  return out;
}

std::vector<double> geomspace(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > 0.0)) throw DomainError("geomspace: bounds must be positive");
  auto out = linspace(std::log(lo), std::log(hi), n);
  for (auto& v : out) v = std::exp(v);
  if (n > 0) out.front() = lo;
  if (n > 1) out.back() = hi;
  return out;
}

double simpson(std::span<const double> x, std::span<const double> f) {
  if (x.size() != f.size()) throw DomainError("simpson: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * (x[1] - x[0]) * (f[0] + f[1]);
  double sum = 0.0;
  std::size_t i = 0;
  for (; i + 2 < n; i += 2) {
    const double h0 = x[i + 1] - x[i];
    const double h1 = x[i + 2] - x[i + 1];
    sum += (h0 + h1) / 6.0 *
           ((2.0 - h1 / h0) * f[i] + (h0 + h1) * (h0 + h1) / (h0 * h1) * f[i + 1] +
            (2.0 - h0 / h1) * f[i + 2]);
  }
  if (i + 1 < n) {
    // Last interval [x1, x2] of the parabola through x0, x1, x2.
    const double h0 = x[i] - x[i - 1];
    const double h1 = x[i + 1] - x[i];
    sum += f[i + 1] * h1 * (2.0 * h1 + 3.0 * h0) / (6.0 * (h0 + h1)) +
           f[i] * h1 * (h1 + 3.0 * h0) / (6.0 * h0) -
           f[i - 1] * h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
  }
  return sum;
}

namespace {

// Fornberg weights for derivatives 0..m at xi from nodes x[0..n).
std::vector<std::vector<double>> fornberg(double xi, std::span<const double> x, int m) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - xi;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - xi;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

std::size_t window_start(std::size_t i, std::size_t n, std::size_t width) {
  if (i < width / 2) return 0;
  return std::min(i - width / 2, n - width);
}

}  // namespace

template <typename T>
std::vector<T> local_derivative(std::span<const double> x, std::span<const T> f,
                                std::size_t width) {
  const std::size_t n = x.size();
  if (f.size() != n) throw DomainError("local_derivative: size mismatch");
  if (n < 2) throw DomainError("local_derivative: need at least two samples");
  width = std::min(width, n);
  std::vector<T> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t s = window_start(i, n, width);
    const auto w = fornberg(x[i], x.subspan(s, width), 1);
    T acc{};
    for (std::size_t k = 0; k < width; ++k) acc += w[1][k] * f[s + k];
    out[i] = acc;
  }
  return out;
}

template <typename T>
std::vector<T> cumulative_integral(std::span<const double> x, std::span<const T> f) {
  const std::size_t n = x.size();
  if (f.size() != n) throw DomainError("cumulative_integral: size mismatch");
  std::vector<T> out(n, T{});
  if (n < 2) return out;
  const std::size_t width = std::min<std::size_t>(4, n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    // Integrate the local interpolant over [x_i, x_{i+1}] using 3-point
    // Gauss-Legendre nodes evaluated through Lagrange weights.
    const std::size_t s = std::min(i > 0 ? i - 1 : 0, n - width);
    const auto nodes = x.subspan(s, width);
    const double mid = 0.5 * (x[i] + x[i + 1]);
    const double half = 0.5 * (x[i + 1] - x[i]);
    static constexpr double gx[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static constexpr double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    T seg{};
    for (int g = 0; g < 3; ++g) {
      const auto w = fornberg(mid + half * gx[g], nodes, 0);
      T v{};
      for (std::size_t k = 0; k < width; ++k) v += w[0][k] * f[s + k];
      seg += gw[g] * v;
    }
    out[i + 1] = out[i] + half * seg;
  }
  return out;
}

template std::vector<double> cumulative_integral<double>(std::span<const double>,
                                                         std::span<const double>);
template std::vector<std::complex<double>> cumulative_integral<std::complex<double>>(
    std::span<const double>, std::span<const std::complex<double>>);
template std::vector<double> local_derivative<double>(std::span<const double>,
                                                      std::span<const double>,
                                                      std::size_t);
template std::vector<std::complex<double>> local_derivative<std::complex<double>>(
    std::span<const double>, std::span<const std::complex<double>>, std::size_t);

int count_sign_changes(std::span<const double> f, double floor) {
  int changes = 0;
  int last = 0;
  for (double v : f) {
    if (std::abs(v) <= floor) continue;
    const int s = v > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HEUNWELL_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    } catch (const std::exception&) {
      // Ignore malformed values.
    }
  }
  return n;
}

}  // namespace heunwell
