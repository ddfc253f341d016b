#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "errors.hpp"
#include "laurent.hpp"
#include "roots.hpp"

namespace fredholm {

enum class Status { Fredholm, NotFredholm, NumericallyMarginal };

inline const char* to_string(Status s) noexcept {
  switch (s) {
    case Status::Fredholm: return "Fredholm";
    case Status::NotFredholm: return "NotFredholm";
    case Status::NumericallyMarginal: return "NumericallyMarginal";
  }
  return "?";
}

inline Status status_from_string(const std::string& s) {
  if (s == "Fredholm") return Status::Fredholm;
  if (s == "NotFredholm") return Status::NotFredholm;
  if (s == "NumericallyMarginal") return Status::NumericallyMarginal;
  throw InvalidArgument("unknown status " + s);
}

struct Certificate {
  double min_modulus_on_circle = 0.0;
  int roots_inside = 0;
  int pole_order = 0;
  std::optional<int> winding;
};

/// Verdict of an index engine. `index` is present iff status is Fredholm.
struct IndexResult {
  Status status = Status::NotFredholm;
  std::optional<std::int64_t> index;
  Certificate certificate;

  bool fredholm() const noexcept { return status == Status::Fredholm; }
};

inline constexpr double kDefaultBand = 1e-8;

/// Lower bound for min |p| on the unit circle from the factorization
/// |c_k| prod |z - zeta| >= |c_k| prod ||zeta| - 1|.
inline double circle_modulus_lower_bound(const LaurentPolynomial& p, const std::vector<Root>& roots) {
  const LaurentPolynomial n = normalize(p);
  double bound = std::abs(n.coeffs().back());
  for (const auto& r : roots) bound *= std::pow(std::abs(std::abs(r.value) - 1.0), r.multiplicity);
  return bound;
}

/// Index of the shift operator sum c_i a^i: roots of p inside the unit
/// circle minus the pole order at 0. A root within `band` of the circle
/// gives NumericallyMarginal instead of guessing a side.
inline IndexResult index_shift_poly(const LaurentPolynomial& p, double band = kDefaultBand,
                                    const RootOptions& opt = {}) {
  const LaurentPolynomial n = normalize(p);
  if (n.is_zero()) throw ZeroSymbol("index_shift_poly: zero polynomial");
  const auto rc = classify_roots(find_roots(n, opt), band);

  IndexResult out;
  out.certificate.roots_inside = rc.inside;
  out.certificate.pole_order = n.pole_order();
  if (rc.on_circle > 0) {
    out.status = Status::NumericallyMarginal;
    out.certificate.min_modulus_on_circle = 0.0;
    return out;
  }
  out.status = Status::Fredholm;
  out.index = rc.inside - n.pole_order();
  out.certificate.min_modulus_on_circle = circle_modulus_lower_bound(n, rc.roots);
  return out;
}

inline nlohmann::json to_json_value(const IndexResult& r) {
  nlohmann::json cert = {{"min_modulus_on_circle", r.certificate.min_modulus_on_circle},
                         {"roots_inside", r.certificate.roots_inside},
                         {"pole_order", r.certificate.pole_order}};
  cert["winding"] = r.certificate.winding ? nlohmann::json(*r.certificate.winding) : nlohmann::json();
  nlohmann::json j = {{"status", to_string(r.status)}, {"certificate", cert}};
  j["index"] = r.index ? nlohmann::json(*r.index) : nlohmann::json();
  return j;
}

}  // namespace fredholm
