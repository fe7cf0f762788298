#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace heunwell {

std::vector<double> linspace(double lo, double hi, std::size_t n);

/// Points spaced uniformly in log(x); lo > 0.
std::vector<double> geomspace(double lo, double hi, std::size_t n);

/// Integral of samples over a strictly increasing, possibly non-uniform grid.
/// Consecutive triples are integrated through their interpolating parabola;
/// an odd trailing interval uses the parabola through the last three points.
double simpson(std::span<const double> x, std::span<const double> f);

/// Running integral from x[0] to each x[i] with a cubic through the four
/// nearest samples on every interval.
template <typename T>
std::vector<T> cumulative_integral(std::span<const double> x,
                                   std::span<const T> f);

/// Derivative of the local interpolating polynomial (up to `width` points,
/// centred where possible) at every sample.
template <typename T>
std::vector<T> local_derivative(std::span<const double> x, std::span<const T> f,
                                std::size_t width = 7);

/// Number of sign changes, ignoring samples below `floor` in magnitude.
int count_sign_changes(std::span<const double> f, double floor);

/// Worker count: hardware concurrency capped by HEUNWELL_THREADS when set.
unsigned worker_count();

extern template std::vector<double> cumulative_integral<double>(
    std::span<const double>, std::span<const double>);
extern template std::vector<std::complex<double>>
cumulative_integral<std::complex<double>>(
    std::span<const double>, std::span<const std::complex<double>>);
extern template std::vector<double> local_derivative<double>(
    std::span<const double>, std::span<const double>, std::size_t);
extern template std::vector<std::complex<double>>
local_derivative<std::complex<double>>(std::span<const double>,
                                       std::span<const std::complex<double>>,
                                       std::size_t);

}  // namespace heunwell
