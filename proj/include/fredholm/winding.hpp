#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"
#include "index.hpp"
#include "symbol.hpp"

namespace fredholm {

inline constexpr double kDefaultVanishTol = 1e-6;
inline constexpr long kDefaultSampleCap = 1L << 20;

struct WindingOptions {
  long n0 = 8;
  double vanish_tol = kDefaultVanishTol;
  long max_samples = kDefaultSampleCap;
};

struct WindingResult {
  int winding = 0;
  double min_modulus = 0.0;
  long samples_used = 0;
  bool converged = false;
};

namespace detail {

struct PhaseSummary {
  double total = 0.0;
  double max_step = 0.0;
  double min_modulus = 0.0;
};

inline PhaseSummary unwrap(const std::vector<cplx>& v) {
  PhaseSummary s;
  s.min_modulus = std::abs(v[0]);
  const std::size_t n = v.size();
  for (std::size_t k = 0; k < n; ++k) {
    const cplx a = v[k];
    const cplx b = v[(k + 1) % n];
    s.min_modulus = std::min(s.min_modulus, std::abs(b));
    const double step = std::arg(b * std::conj(a));
    s.total += step;
    s.max_step = std::max(s.max_step, std::abs(step));
  }
  return s;
}

}  // namespace detail

/// Winding number of theta -> f(theta) by sample doubling.
///
/// Sampling starts at n0 points and doubles until every sample clears
/// vanish_tol, every principal phase step is below pi/2, and the integer
/// agrees with the previous level. `native` > 0 caps the grid (sampled
/// symbols); at that cap the first two conditions suffice.
template <class Sampler>
WindingResult winding_of(Sampler&& f, const WindingOptions& opt = {}, std::size_t native = 0) {
  if (opt.n0 < 8 || !is_power_of_two(static_cast<std::size_t>(opt.n0)))
    throw InvalidArgument("winding_number: n0 must be a power of two >= 8");
  if (!(opt.vanish_tol > 0.0)) throw InvalidArgument("winding_number: vanish_tol must be positive");

  std::size_t cap = static_cast<std::size_t>(std::max(opt.max_samples, opt.n0));
  if (native > 0) cap = native;
  std::size_t n = std::min(static_cast<std::size_t>(opt.n0), cap);

  std::vector<cplx> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = f(kTwoPi * static_cast<double>(k) / static_cast<double>(n));

  bool have_prev = false;
  long prev = 0;
  for (;;) {
    const auto s = detail::unwrap(v);
    if (!(s.min_modulus > opt.vanish_tol))
      throw VanishingSymbol("symbol modulus " + std::to_string(s.min_modulus) + " <= vanish_tol at " +
                                std::to_string(n) + " samples",
                            s.min_modulus, static_cast<long>(n));
    const bool steps_ok = s.max_step < kPi / 2;
    const long w = std::lround(s.total / kTwoPi);
    if (steps_ok && ((have_prev && prev == w) || (native > 0 && n == cap)))
      return {static_cast<int>(w), s.min_modulus, static_cast<long>(n), true};
    have_prev = steps_ok;
    prev = w;
    if (n * 2 > cap)
      throw Unresolved("winding_number: phase steps did not settle within " + std::to_string(cap) + " samples");

    // Refine: keep the even samples, evaluate the new odd ones.
    std::vector<cplx> next(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
      next[2 * k] = v[k];
      next[2 * k + 1] = f(kTwoPi * static_cast<double>(2 * k + 1) / static_cast<double>(2 * n));
    }
    v.swap(next);
    n *= 2;
  }
}

inline WindingResult winding_number(const CircleSymbol& f, const WindingOptions& opt = {}) {
  if (f.is_sampled()) {
    const auto& s = std::get<SampledSymbol>(f.repr());
    const std::size_t native = s.size();
    // Every level is an exact subsample of the native grid.
    return winding_of(
        [&s, native](double theta) {
          long k = std::lround(theta / kTwoPi * static_cast<double>(native));
          k %= static_cast<long>(native);
          return s.values[static_cast<std::size_t>(k)];
        },
        opt, native);
  }
  // Trigonometric polynomials: start above the bandwidth so two aliased
  // levels cannot agree on a wrong integer.
  WindingOptions o = opt;
  const LaurentPolynomial p = normalize(f.as_laurent());
  const long band = std::max(std::abs(static_cast<long>(p.lowest_exponent())),
                             std::abs(static_cast<long>(p.highest_exponent())));
  while (o.n0 < 4 * band && o.n0 * 2 <= o.max_samples) o.n0 *= 2;
  return winding_of([&f](double theta) { return f.eval(theta); }, o);
}

inline WindingResult winding_number(const CircleSymbol& f, long n0, double vanish_tol) {
  WindingOptions opt;
  opt.n0 = n0;
  opt.vanish_tol = vanish_tol;
  return winding_number(f, opt);
}

/// Index(T_f) = -winding(f). A vanishing symbol gives NumericallyMarginal;
/// Unresolved propagates.
inline IndexResult toeplitz_index(const CircleSymbol& f, const WindingOptions& opt = {}) {
  IndexResult out;
  int pole = 0;
  if (!f.is_sampled()) pole = normalize(f.as_laurent()).pole_order();
  out.certificate.pole_order = pole;
  try {
    const auto w = winding_number(f, opt);
    out.status = Status::Fredholm;
    out.index = -w.winding;
    out.certificate.winding = w.winding;
    out.certificate.min_modulus_on_circle = w.min_modulus;
    // Argument principle: zeros inside = winding + pole order (Laurent only).
    if (!f.is_sampled()) out.certificate.roots_inside = w.winding + pole;
  } catch (const VanishingSymbol& e) {
    out.status = Status::NumericallyMarginal;
    out.certificate.min_modulus_on_circle = e.min_modulus();
  }
  return out;
}

inline IndexResult toeplitz_index(const CircleSymbol& f, double vanish_tol) {
  WindingOptions opt;
  opt.vanish_tol = vanish_tol;
  return toeplitz_index(f, opt);
}

// ---------------------------------------------------------------------------
// Winding pumping in C^l: a symbol that vanishes on an arc, plus a tiny
// fast oscillation, winds about N delta / 2 pi times.

/// Smooth step on [0, 1] built from exp(-1/x); flat to all orders at both ends.
inline double flat_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

/// Base symbol: 0 on |theta| <= delta/2, 1 beyond a collar of width delta/4.
inline double pump_base(double theta, double delta) {
  double t = std::remainder(theta, kTwoPi);
  const double d = std::abs(t);
  const double half = delta / 2.0;
  const double collar = delta / 4.0;
  return flat_step((d - half) / collar);
}

inline WindingResult cl_pump_demo(double delta, double epsilon, int N, WindingOptions opt = {}) {
  if (!(delta > 0.0 && delta < kPi)) throw InvalidArgument("cl_pump_demo: need 0 < delta < pi");
  if (!(epsilon >= 0.0)) throw InvalidArgument("cl_pump_demo: epsilon must be nonnegative");
  // Start fine enough to resolve e^{iN theta} and the arc itself, so the
  // doubling check never compares two aliased levels.
  const double need = std::max({8.0, 8.0 * std::abs(static_cast<double>(N)), 64.0 * kTwoPi / delta});
  long n0 = 8;
  while (static_cast<double>(n0) < need) n0 *= 2;
  opt.n0 = std::max(opt.n0, n0);
  return winding_of(
      [=](double theta) { return cplx{pump_base(theta, delta)} + epsilon * std::polar(1.0, N * theta); }, opt);
}

}  // namespace fredholm
