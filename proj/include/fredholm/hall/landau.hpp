#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "../index.hpp"
#include "../phase_diagram.hpp"

namespace fredholm::hall {

inline constexpr double kDefaultLandauTol = 1e-9;

/// Hall index of the Euclidean Landau Hamiltonian at field B and Fermi
/// energy E, in units where the levels sit at E_n = |B| (2n + 1).
///
/// E <= 0 gives index 0. For B != 0 the index is sign(B) times the number of
/// levels below E. On a level (within tol, relative to max(1, E)) the result
/// is NumericallyMarginal; on the B = 0 axis with E > 0 infinitely many
/// levels have collapsed and the result is NotFredholm.
inline IndexResult landau_index(double B, double E, double tol = kDefaultLandauTol) {
  IndexResult r;
  if (E <= 0.0) {
    r.status = Status::Fredholm;
    r.index = 0;
    r.certificate.min_modulus_on_circle = std::abs(B) - E;  // distance to the lowest level
    return r;
  }
  const double b = std::abs(B);
  if (b <= tol || E / b > 1e15) {
    r.status = Status::NotFredholm;
    return r;
  }
  // Nearest level index and the number of levels strictly below E.
  const double x = (E / b - 1.0) / 2.0;
  const double nearest = std::max(0.0, std::round(x));
  const double gap = std::abs(E - b * (2.0 * nearest + 1.0));
  if (gap <= tol * std::max(1.0, E)) {
    r.status = Status::NumericallyMarginal;
    return r;
  }
  const auto count = x < 0.0 ? std::int64_t{0} : static_cast<std::int64_t>(std::floor(x)) + 1;
  r.status = Status::Fredholm;
  r.index = B > 0.0 ? count : -count;
  r.certificate.roots_inside = static_cast<int>(std::min<std::int64_t>(count, std::numeric_limits<int>::max()));
  r.certificate.min_modulus_on_circle = gap;
  return r;
}

inline ParamFamily landau_family() {
  ParamFamily f;
  f.kind = FamilyKind::LandauPlane;
  return f;
}

/// Landau diagram over (B, E) = (x, y) through the phase-grid writers.
/// Indices beyond +-100 near the B axis are coded kCodeEngineError.
inline PhaseGrid landau_sweep(const GridSpec& spec, const SweepOptions& opt = {}, double tol = kDefaultLandauTol) {
  return sweep_cells(
      landau_family(), spec, opt, [tol](double B, double E) { return landau_index(B, E, tol); }, "landau");
}

}  // namespace fredholm::hall
