#pragma once

#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "laurent.hpp"

namespace fredholm {

/// Finite Fourier series sum_{n=-M}^{M} c_n e^{in theta}; coeffs[n + M] = c_n.
struct FourierSymbol {
  std::vector<cplx> coeffs;

  int half_width() const noexcept { return (static_cast<int>(coeffs.size()) - 1) / 2; }
  cplx coeff(int n) const noexcept {
    const int M = half_width();
    return (n < -M || n > M) ? cplx{0.0} : coeffs[static_cast<std::size_t>(n + M)];
  }

  friend bool operator==(const FourierSymbol&, const FourierSymbol&) = default;
};

/// Values at theta_k = 2 pi k / N, N a power of two >= 8.
struct SampledSymbol {
  std::vector<cplx> values;

  std::size_t size() const noexcept { return values.size(); }

  friend bool operator==(const SampledSymbol&, const SampledSymbol&) = default;
};

inline bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

/// A function on the unit circle.
class CircleSymbol {
 public:
  using Repr = std::variant<LaurentPolynomial, FourierSymbol, SampledSymbol>;

  CircleSymbol(LaurentPolynomial p) : repr_(std::move(p)) {}  // NOLINT(implicit)
  CircleSymbol(FourierSymbol f) : repr_(std::move(f)) {       // NOLINT(implicit)
    if (std::get<FourierSymbol>(repr_).coeffs.size() % 2 == 0)
      throw InvalidArgument("Fourier symbol needs 2M+1 coefficients");
  }
  CircleSymbol(SampledSymbol s) : repr_(std::move(s)) {  // NOLINT(implicit)
    const auto n = std::get<SampledSymbol>(repr_).size();
    if (n < 8 || !is_power_of_two(n))
      throw InvalidArgument("sampled symbol needs a power-of-two grid with N >= 8, got " + std::to_string(n));
  }

  const Repr& repr() const noexcept { return repr_; }
  bool is_sampled() const noexcept { return std::holds_alternative<SampledSymbol>(repr_); }

  /// Native grid size for sampled symbols, 0 otherwise.
  std::size_t native_size() const noexcept {
    if (auto s = std::get_if<SampledSymbol>(&repr_)) return s->size();
    return 0;
  }

  /// Laurent view of a Laurent or Fourier symbol; throws for sampled ones.
  LaurentPolynomial as_laurent() const {
    if (auto p = std::get_if<LaurentPolynomial>(&repr_)) return *p;
    if (auto f = std::get_if<FourierSymbol>(&repr_)) return {f->half_width(), f->coeffs};
    throw InvalidArgument("sampled symbol has no Laurent form");
  }

  cplx eval(double theta) const {
    return std::visit(
        [theta](const auto& r) -> cplx {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, LaurentPolynomial>) {
            return r.on_circle(theta);
          } else if constexpr (std::is_same_v<T, FourierSymbol>) {
            const int M = r.half_width();
            cplx acc = 0.0;
            const cplx z = std::polar(1.0, theta);
            for (auto it = r.coeffs.rbegin(); it != r.coeffs.rend(); ++it) acc = acc * z + *it;
            return acc * std::polar(1.0, -theta * M);
          } else {
            const auto N = static_cast<long>(r.size());
            long k = std::lround(theta / kTwoPi * static_cast<double>(N));
            k = ((k % N) + N) % N;
            return r.values[static_cast<std::size_t>(k)];
          }
        },
        repr_);
  }

 private:
  Repr repr_;
};

/// Pointwise evaluation; Sampled symbols return the nearest grid value.
inline cplx eval(const CircleSymbol& f, double theta) { return f.eval(theta); }

/// Toeplitz symbol of the shift operator p(a), i.e. p(z^-1).
inline CircleSymbol symbol_of_shift_poly(const LaurentPolynomial& p) { return reflect(p); }

inline FourierSymbol fourier_from_laurent(const LaurentPolynomial& p) {
  const int M = std::max(p.pole_order(), std::max(p.highest_exponent(), 0));
  FourierSymbol f;
  f.coeffs.assign(static_cast<std::size_t>(2 * M + 1), 0.0);
  for (int e = p.lowest_exponent(); e <= p.highest_exponent(); ++e)
    f.coeffs[static_cast<std::size_t>(e + M)] = p.coeff(e);
  return f;
}

inline SampledSymbol sample_symbol(const CircleSymbol& f, std::size_t n) {
  SampledSymbol s;
  s.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) s.values[k] = f.eval(kTwoPi * static_cast<double>(k) / static_cast<double>(n));
  return s;
}

/// Parse `theta,re,im` rows. Blank lines, '#' comments and a non-numeric
/// header row are skipped. The grid must be theta_k = 2 pi k / N.
inline SampledSymbol sampled_from_csv(std::istream& in, const std::string& source = "<stream>") {
  std::vector<double> thetas;
  SampledSymbol s;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
      throw InvalidArgument(source + ":" + std::to_string(lineno) + ": expected theta,re,im");
    double t, re, im;
    try {
      t = std::stod(a);
      re = std::stod(b);
      im = std::stod(c);
    } catch (const std::exception&) {
      if (thetas.empty() && s.values.empty()) continue;  // header
      throw InvalidArgument(source + ":" + std::to_string(lineno) + ": non-numeric field");
    }
    if (!thetas.empty() && !(t > thetas.back()))
      throw InvalidArgument(source + ":" + std::to_string(lineno) + ": theta not strictly increasing");
    thetas.push_back(t);
    s.values.emplace_back(re, im);
  }
  const std::size_t n = s.values.size();
  if (n < 8 || !is_power_of_two(n))
    throw InvalidArgument(source + ": sample count " + std::to_string(n) + " is not a power of two >= 8");
  const double h = kTwoPi / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k)
    if (std::abs(thetas[k] - h * static_cast<double>(k)) > 1e-9 * kTwoPi)
      throw InvalidArgument(source + ": theta grid is not 2*pi*k/" + std::to_string(n) + " at row " +
                            std::to_string(k));
  return s;
}

inline SampledSymbol sampled_from_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return sampled_from_csv(in, path);
}

/// Fourier symbol from the Laurent JSON layout (exponents -pole_order..n).
inline FourierSymbol fourier_from_json(const nlohmann::json& j) {
  return fourier_from_laurent(laurent_from_json(j));
}

}  // namespace fredholm
