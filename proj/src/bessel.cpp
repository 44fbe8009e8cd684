#include "bessel.hpp"

#include <cmath>

#include "core.hpp"

namespace telegraph {

namespace {

constexpr double kSeriesCutoff = 20.0;
constexpr double kTwoPi = 6.283185307179586476925286766559;

// I_nu by the ascending series, nu in {0,1}. All terms are positive, the
// largest sits near k ~ x/2, and for x <= 20 nothing comes close to
// overflow, so plain summation is accurate to machine precision.
double series_i(int nu, double x) {
  const double q = 0.25 * x * x;
  double term = nu == 0 ? 1.0 : 0.5 * x;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k + nu));
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return sum;
}

// e^(-x) I_nu(x) ~ (2 pi x)^(-1/2) * sum_k c_k with
// c_k = c_{k-1} * ((2k-1)^2 - 4 nu^2) / (8 k x). The series is truncated at
// its smallest term; at x >= 20 that term is already below 1e-16.
double asymptotic_i_scaled(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = term;
  for (int k = 1; k < 40; ++k) {
    double odd = 2.0 * k - 1.0;
    double next = term * (odd * odd - mu) / (8.0 * k * x);
    if (std::abs(next) >= std::abs(term)) break;  // asymptotic tail turning
    term = next;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum / std::sqrt(kTwoPi * x);
}

double i_scaled(int nu, double x) {
  if (!(x >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "bessel argument must be >= 0");
  if (x <= kSeriesCutoff) return series_i(nu, x) * std::exp(-x);
  return asymptotic_i_scaled(nu, x);
}

}  // namespace

double bessel_i0_scaled(double x) { return i_scaled(0, x); }
double bessel_i1_scaled(double x) { return i_scaled(1, x); }

double bessel_i0(double x) {
  if (!(x >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "bessel argument must be >= 0");
  if (x <= kSeriesCutoff) return series_i(0, x);
  return asymptotic_i_scaled(0, x) * std::exp(x);
}

double bessel_i1(double x) {
  if (!(x >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "bessel argument must be >= 0");
  if (x <= kSeriesCutoff) return series_i(1, x);
  return asymptotic_i_scaled(1, x) * std::exp(x);
}

}  // namespace telegraph
