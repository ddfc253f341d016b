#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"
#include "laurent.hpp"

namespace fredholm {

struct Root {
  cplx value;
  int multiplicity = 1;
};

struct RootOptions {
  double tol = 1e-12;    // residual bound, relative to sum|c_i| max(1,|z|)^deg
  int max_iterations = 200;
  int max_degree = kMaxDegree;
};

struct RootClassification {
  int inside = 0;
  int on_circle = 0;
  int outside = 0;
  double band = 0.0;
  std::vector<Root> roots;

  int total() const noexcept { return inside + on_circle + outside; }
};

namespace detail {

// p and p' at z for ascending coefficients a[0..k].
inline void horner_with_derivative(const std::vector<cplx>& a, cplx z, cplx& p, cplx& dp) {
  p = a.back();
  dp = 0.0;
  for (std::size_t i = a.size() - 1; i-- > 0;) {
    dp = dp * z + p;
    p = p * z + a[i];
  }
}

inline double horner_abs_bound(const std::vector<double>& abs_a, double r) {
  double s = 0.0;
  for (auto it = abs_a.rbegin(); it != abs_a.rend(); ++it) s = s * r + *it;
  return s;
}

inline cplx horner(const std::vector<cplx>& a, cplx z) {
  cplx p = a.back();
  for (std::size_t i = a.size() - 1; i-- > 0;) p = p * z + a[i];
  return p;
}

inline double residual_scale(const std::vector<cplx>& a, cplx z) {
  double s = 0.0;
  for (const auto& c : a) s += std::abs(c);
  const int deg = static_cast<int>(a.size()) - 1;
  return s * std::pow(std::max(1.0, std::abs(z)), deg);
}

// Aberth-Ehrlich on a polynomial with a[0] != 0 and a.back() != 0.
inline std::vector<cplx> aberth(const std::vector<cplx>& a, const RootOptions& opt) {
  const int k = static_cast<int>(a.size()) - 1;
  if (k == 0) return {};
  if (k == 1) return {-a[0] / a[1]};

  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::vector<double> abs_a(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) abs_a[i] = std::abs(a[i]);

  // Start on the circle whose radius is the geometric mean of the root moduli.
  const double radius = std::pow(abs_a[0] / abs_a.back(), 1.0 / k);
  std::vector<cplx> z(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) z[j] = std::polar(radius, kTwoPi * j / k + 0.4);

  std::vector<char> done(static_cast<std::size_t>(k), 0);
  for (int it = 0; it < opt.max_iterations; ++it) {
    bool all_done = true;
    for (int j = 0; j < k; ++j) {
      if (done[j]) continue;
      cplx p, dp;
      horner_with_derivative(a, z[j], p, dp);
      const double floor = 4.0 * k * eps * horner_abs_bound(abs_a, std::abs(z[j]));
      if (std::abs(p) <= floor) {
        done[j] = 1;
        continue;
      }
      all_done = false;
      cplx sum = 0.0;
      for (int l = 0; l < k; ++l)
        if (l != j) sum += 1.0 / (z[j] - z[l]);
      const cplx ratio = p / dp;
      cplx step = ratio / (1.0 - ratio * sum);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag()))
        step = std::polar(1e-3 * std::max(1.0, std::abs(z[j])), 1.0 + j);
      z[j] -= step;
      if (std::abs(step) <= 2.0 * eps * std::abs(z[j])) done[j] = 1;
    }
    if (all_done) break;
  }
  return z;
}

// A root of multiplicity m perturbs into m approximations spread over about
// eps^(1/m). Take the largest m whose m nearest neighbours of z_i fit that
// radius and stand clear of the next one.
inline std::vector<Root> cluster(const std::vector<cplx>& z, double eps) {
  std::vector<Root> out;
  std::vector<char> used(z.size(), 0);
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::pair<double, std::size_t>> near;
    for (std::size_t l = 0; l < z.size(); ++l)
      if (!used[l]) near.push_back({std::abs(z[l] - z[i]), l});
    std::sort(near.begin(), near.end());
    const double s = std::max(1.0, std::abs(z[i]));
    std::size_t m = 1;
    for (std::size_t k = 2; k <= near.size(); ++k) {
      const bool tight = near[k - 1].first <= 10.0 * s * std::pow(eps, 1.0 / static_cast<double>(k));
      const bool isolated = k == near.size() || near[k].first > 10.0 * near[k - 1].first;
      if (tight && isolated) m = k;
    }
    cplx centre = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      used[near[k].second] = 1;
      centre += z[near[k].second];
    }
    out.push_back({centre / static_cast<double>(m), static_cast<int>(m)});
  }
  return out;
}

}  // namespace detail

/// Roots of the ordinary polynomial z^m p(z), with multiplicity.
///
/// Roots at the origin come from the low zero coefficients and are reported
/// as one exact entry. The rest are found by Aberth-Ehrlich iteration and each
/// is checked against |q(z)| <= tol * sum|c_i| * max(1,|z|)^deg.
inline std::vector<Root> find_roots(const LaurentPolynomial& p, const RootOptions& opt = {}) {
  const LaurentPolynomial n = normalize(p);
  if (n.is_zero()) throw ZeroSymbol("find_roots: zero polynomial has no finite root set");
  const int degree = static_cast<int>(n.coeffs().size()) - 1;
  if (degree > opt.max_degree)
    throw InvalidArgument("find_roots: degree " + std::to_string(degree) + " exceeds cap " +
                          std::to_string(opt.max_degree));

  std::size_t zeros = 0;
  while (std::abs(n.coeffs()[zeros]) < kZeroCoefficient) ++zeros;
  const std::vector<cplx> a(n.coeffs().begin() + static_cast<std::ptrdiff_t>(zeros), n.coeffs().end());

  std::vector<Root> roots;
  if (zeros > 0) roots.push_back({0.0, static_cast<int>(zeros)});
  if (a.size() <= 1) return roots;

  const std::vector<cplx> z = detail::aberth(a, opt);
  for (const auto& zi : z) {
    const double r = std::abs(detail::horner(a, zi));
    if (!(r <= opt.tol * detail::residual_scale(a, zi)))
      throw NonConvergence("find_roots: residual " + std::to_string(r) + " above bound after " +
                           std::to_string(opt.max_iterations) + " iterations");
  }
  for (auto& r : detail::cluster(z, 8 * std::numeric_limits<double>::epsilon())) roots.push_back(r);
  return roots;
}

/// Sort roots into |z| < 1-band, ||z|-1| <= band, |z| > 1+band.
inline RootClassification classify_roots(const std::vector<Root>& roots, double band) {
  if (!(band > 0.0)) throw InvalidArgument("classify_roots: band must be positive");
  RootClassification rc;
  rc.band = band;
  rc.roots = roots;
  for (const auto& r : roots) {
    const double mod = std::abs(r.value);
    if (mod < 1.0 - band)
      rc.inside += r.multiplicity;
    else if (mod > 1.0 + band)
      rc.outside += r.multiplicity;
    else
      rc.on_circle += r.multiplicity;
  }
  return rc;
}

}  // namespace fredholm
