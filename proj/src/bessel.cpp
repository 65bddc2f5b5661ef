#include "rotorcut/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rotorcut {

namespace {

constexpr double kTermTol = 1e-17;
constexpr int kMaxAsymptoticTerms = 40;

void check_argument(double x, const char* who) {
  if (!std::isfinite(x) || x < 0.0)
    throw std::domain_error(std::string(who) + ": argument must be finite and non-negative");
}

// sum_{k>=1} (x^2/4)^k / (k!)^2, i.e. I0(x) - 1.
double i0_series_tail(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 0.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term <= kTermTol * sum) break;
  }
  return sum;
}

// I1(x) / (x/2) = sum_{k>=0} (x^2/4)^k / (k! (k+1)!).
double i1_series_scaled(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * (k + 1));
    sum += term;
    if (term <= kTermTol * sum) break;
  }
  return sum;
}

// Asymptotic factor in I_nu(x) ~ e^x / sqrt(2 pi x) * (1 + sum_k t_k), with
// t_k = t_{k-1} * ((2k-1)^2 - 4 nu^2) / (8 k x). Returns the sum of t_k for
// k >= 1, truncated before the terms start to grow.
double asymptotic_tail(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 0.0;
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= kMaxAsymptoticTerms; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (odd * odd - mu) / (8.0 * k * x);
    if (std::abs(term) >= previous) break;
    sum += term;
    previous = std::abs(term);
    if (previous <= kTermTol) break;
  }
  return sum;
}

}  // namespace

double log_bessel_i0(double x) {
  check_argument(x, "log_bessel_i0");
  if (x < kBesselSeriesLimit) return std::log1p(i0_series_tail(x));
  return x - 0.5 * std::log(2.0 * std::numbers::pi * x) + std::log1p(asymptotic_tail(0, x));
}

double bessel_ratio(double x) {
  check_argument(x, "bessel_ratio");
  if (x < kBesselSeriesLimit) return 0.5 * x * i1_series_scaled(x) / (1.0 + i0_series_tail(x));
  return (1.0 + asymptotic_tail(1, x)) / (1.0 + asymptotic_tail(0, x));
}

}  // namespace rotorcut
