#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"

namespace fredholm {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Coefficients with modulus below this are treated as exact zeros when trimming.
inline constexpr double kZeroCoefficient = 1e-300;

// Default cap on the degree of z^m p(z).
inline constexpr int kMaxDegree = 256;

/// Finite Laurent polynomial p(z) = sum_{i=-m}^{n} c_i z^i.
///
/// coeffs()[k] is the coefficient of z^(k - pole_order()). The operator
/// sum c_i a^i (with a^-1 read as the adjoint shift) has this as its symbol.
/// The empty coefficient list with pole order 0 is the zero polynomial.
class LaurentPolynomial {
 public:
  LaurentPolynomial() = default;

  LaurentPolynomial(int pole_order, std::vector<cplx> coeffs)
      : pole_order_(pole_order), coeffs_(std::move(coeffs)) {
    if (pole_order_ < 0) throw InvalidArgument("pole_order must be nonnegative");
    if (coeffs_.empty()) pole_order_ = 0;
  }

  /// c * z^exponent.
  static LaurentPolynomial monomial(int exponent, cplx c = 1.0) {
    if (exponent >= 0) {
      std::vector<cplx> v(static_cast<std::size_t>(exponent) + 1, 0.0);
      v.back() = c;
      return {0, std::move(v)};
    }
    return {-exponent, {c}};
  }

  /// Coefficients listed from exponent `lowest` upward; positive `lowest`
  /// is padded with zeros down to exponent 0.
  static LaurentPolynomial from_lowest(int lowest, std::vector<cplx> coeffs) {
    if (lowest >= 0) {
      coeffs.insert(coeffs.begin(), static_cast<std::size_t>(lowest), cplx{0.0});
      return {0, std::move(coeffs)};
    }
    return {-lowest, std::move(coeffs)};
  }

  int pole_order() const noexcept { return pole_order_; }
  const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }

  int lowest_exponent() const noexcept { return -pole_order_; }
  int highest_exponent() const noexcept {
    return static_cast<int>(coeffs_.size()) - 1 - pole_order_;
  }

  cplx coeff(int exponent) const noexcept {
    const int k = exponent + pole_order_;
    if (k < 0 || k >= static_cast<int>(coeffs_.size())) return 0.0;
    return coeffs_[static_cast<std::size_t>(k)];
  }

  /// Evaluate at z != 0 (Horner on z^m p(z), then divide by z^m).
  cplx operator()(cplx z) const noexcept {
    cplx acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    if (pole_order_ > 0) acc /= std::pow(z, pole_order_);
    return acc;
  }

  /// Evaluate on the unit circle at angle theta.
  cplx on_circle(double theta) const noexcept {
    const cplx z = std::polar(1.0, theta);
    cplx acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    if (pole_order_ > 0) acc *= std::polar(1.0, -theta * pole_order_);
    return acc;
  }

  double l1_norm() const noexcept {
    double s = 0.0;
    for (const auto& c : coeffs_) s += std::abs(c);
    return s;
  }

  friend bool operator==(const LaurentPolynomial&, const LaurentPolynomial&) = default;

 private:
  int pole_order_ = 0;
  std::vector<cplx> coeffs_;
};

/// Strip zero coefficients at the top and, while the exponent is negative,
/// at the bottom. Zero coefficients at nonnegative exponents below the first
/// nonzero one are kept: they encode a root at the origin.
inline LaurentPolynomial normalize(const LaurentPolynomial& p) {
  const auto& c = p.coeffs();
  std::size_t hi = c.size();
  while (hi > 0 && std::abs(c[hi - 1]) < kZeroCoefficient) --hi;
  if (hi == 0) return {};
  std::size_t lo = 0;
  int m = p.pole_order();
  while (m > 0 && std::abs(c[lo]) < kZeroCoefficient) {
    ++lo;
    --m;
  }
  return {m, std::vector<cplx>(c.begin() + static_cast<std::ptrdiff_t>(lo),
                               c.begin() + static_cast<std::ptrdiff_t>(hi))};
}

/// Coefficient convolution; pole orders add.
inline LaurentPolynomial multiply(const LaurentPolynomial& p, const LaurentPolynomial& q) {
  if (p.is_zero() || q.is_zero()) return {};
  std::vector<cplx> out(p.coeffs().size() + q.coeffs().size() - 1, 0.0);
  for (std::size_t i = 0; i < p.coeffs().size(); ++i)
    for (std::size_t j = 0; j < q.coeffs().size(); ++j) out[i + j] += p.coeffs()[i] * q.coeffs()[j];
  return {p.pole_order() + q.pole_order(), std::move(out)};
}

inline LaurentPolynomial operator*(const LaurentPolynomial& p, const LaurentPolynomial& q) {
  return multiply(p, q);
}

inline LaurentPolynomial scale(const LaurentPolynomial& p, cplx lambda) {
  auto c = p.coeffs();
  for (auto& x : c) x *= lambda;
  return {p.pole_order(), std::move(c)};
}

/// Sum of two Laurent polynomials over the union of their exponent ranges.
inline LaurentPolynomial add(const LaurentPolynomial& p, const LaurentPolynomial& q) {
  if (p.is_zero()) return q;
  if (q.is_zero()) return p;
  const int lo = std::min(p.lowest_exponent(), q.lowest_exponent());
  const int hi = std::max(p.highest_exponent(), q.highest_exponent());
  std::vector<cplx> c(static_cast<std::size_t>(hi - lo + 1));
  for (int e = lo; e <= hi; ++e) c[static_cast<std::size_t>(e - lo)] = p.coeff(e) + q.coeff(e);
  return LaurentPolynomial::from_lowest(lo, std::move(c));
}

/// Symbol of the adjoint operator: c_i -> conj(c_{-i}).
inline LaurentPolynomial adjoint_symbol(const LaurentPolynomial& p) {
  if (p.is_zero()) return {};
  std::vector<cplx> c(p.coeffs().rbegin(), p.coeffs().rend());
  for (auto& x : c) x = std::conj(x);
  return LaurentPolynomial::from_lowest(-p.highest_exponent(), std::move(c));
}

/// p(z^-1) without conjugation. The shift operator p(a) is the Toeplitz
/// operator with this symbol, because T_{z^k} shifts e_n to e_{n+k}.
inline LaurentPolynomial reflect(const LaurentPolynomial& p) {
  if (p.is_zero()) return {};
  std::vector<cplx> c(p.coeffs().rbegin(), p.coeffs().rend());
  return LaurentPolynomial::from_lowest(-p.highest_exponent(), std::move(c));
}

// ---------------------------------------------------------------------------
// JSON: {"pole_order": m, "coeffs": [[re, im], ...]} for exponents -m..n.

inline nlohmann::json to_json_value(const LaurentPolynomial& p) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : p.coeffs()) coeffs.push_back({c.real(), c.imag()});
  return {{"pole_order", p.pole_order()}, {"coeffs", coeffs}};
}

inline cplx complex_from_json(const nlohmann::json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw InvalidArgument("complex value must be a number or a [re, im] pair, got " + v.dump());
}

inline LaurentPolynomial laurent_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("Laurent polynomial JSON must be an object");
  if (!j.contains("coeffs") || !j["coeffs"].is_array())
    throw InvalidArgument("Laurent polynomial JSON needs a \"coeffs\" array");
  int m = 0;
  if (j.contains("pole_order")) {
    if (!j["pole_order"].is_number_integer() || j["pole_order"].get<long long>() < 0)
      throw InvalidArgument("pole_order must be a nonnegative integer");
    m = j["pole_order"].get<int>();
  }
  std::vector<cplx> c;
  c.reserve(j["coeffs"].size());
  for (const auto& v : j["coeffs"]) c.push_back(complex_from_json(v));
  if (c.empty() && m != 0) throw InvalidArgument("empty coeffs with nonzero pole_order");
  return {m, std::move(c)};
}

inline nlohmann::json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("malformed JSON in " + what + ": " + e.what());
  }
}

/// Accepts inline JSON (first non-space character '{' or '[') or a file path.
inline nlohmann::json load_json_arg(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '['))
    return parse_json_text(arg, "inline argument");
  std::ifstream in(arg);
  if (!in) throw IoError("cannot open " + arg);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), arg);
}

}  // namespace fredholm
