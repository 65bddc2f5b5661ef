#pragma once

namespace rotorcut {

/// ln I0(x) for x >= 0, finite for all finite x (about x - ln(2 pi x)/2 for
/// large x). Throws std::domain_error on negative or non-finite input.
double log_bessel_i0(double x);

/// I1(x) / I0(x) = d/dx ln I0(x), in [0, 1). Throws std::domain_error on
/// negative or non-finite input.
double bessel_ratio(double x);

/// Arguments below this use the power series, at or above it the asymptotic
/// expansion in 1/x.
inline constexpr double kBesselSeriesLimit = 25.0;

}  // namespace rotorcut
