#pragma once

#include <cmath>

#include "../errors.hpp"

namespace fredholm::hall {

inline constexpr long kMaxPupLevel = 1000000;

struct PupElement {
  long m = 0;
  double value = 0.0;
};

namespace detail {

// log( Gamma(x + 1/2) / (Gamma(x) sqrt(x)) ) for x >= 16, from the difference
// of two Stirling series. The leading part is regrouped as
// x log1p(1/(2x)) - 1/2 so nothing large cancels.
inline double log_half_ratio_asymptotic(double x) {
  // B_{2k} / (2k (2k - 1)), k = 1..6.
  constexpr double c[] = {1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0, -691.0 / 360360.0};
  const double y = x + 0.5;
  double series = 0.0;
  double px = 1.0 / x, py = 1.0 / y;
  const double ix2 = px * px, iy2 = py * py;
  for (double ck : c) {
    series += ck * (py - px);
    px *= ix2;
    py *= iy2;
  }
  return x * std::log1p(0.5 / x) - 0.5 + series;
}

}  // namespace detail

/// Gamma(x + 1/2) / (Gamma(x) sqrt(x)) for real x >= 1.
inline double half_gamma_ratio(double x) {
  constexpr double kSwitch = 16.0;
  if (x >= kSwitch) return std::exp(detail::log_half_ratio_asymptotic(x));
  // Recurse upward: R(x) = R(x + 1) x / (x + 1/2), with R(x) = Gamma(x+1/2)/Gamma(x).
  int shift = static_cast<int>(std::ceil(kSwitch - x));
  const double top = x + shift;
  double ratio = std::exp(detail::log_half_ratio_asymptotic(top)) * std::sqrt(top);
  for (int k = shift - 1; k >= 0; --k) {
    const double xk = x + k;
    ratio *= xk / (xk + 0.5);
  }
  return ratio / std::sqrt(x);
}

/// <m+1| PUP |m> on the lowest Landau level: (m+1/2)! / (m! sqrt(m+1)).
inline PupElement pup_matrix_element(long m) {
  if (m < 0 || m > kMaxPupLevel) throw InvalidArgument("pup_matrix_element: need 0 <= m <= 1e6");
  return {m, half_gamma_ratio(static_cast<double>(m) + 1.0)};
}

/// sup_{m >= M} |1 - value(m)| = 1 - value(M), since value increases to 1.
inline double pup_compact_deviation(long M) {
  if (M < 1) throw InvalidArgument("pup_compact_deviation: need M >= 1");
  if (M > kMaxPupLevel) throw InvalidArgument("pup_compact_deviation: need M <= 1e6");
  const double x = static_cast<double>(M) + 1.0;
  if (x >= 16.0) return -std::expm1(detail::log_half_ratio_asymptotic(x));
  return 1.0 - half_gamma_ratio(x);
}

}  // namespace fredholm::hall
