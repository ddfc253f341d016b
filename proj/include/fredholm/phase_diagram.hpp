#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "index.hpp"
#include "laurent.hpp"
#include "parallel.hpp"
#include "symbol.hpp"
#include "winding.hpp"

namespace fredholm {

// Cell codes: the certified index in [-100, 100], or a sentinel.
inline constexpr std::int8_t kCodeMarginal = 127;     // NotFredholm / NumericallyMarginal
inline constexpr std::int8_t kCodeEngineError = 126;  // engine failure or |index| > 100
inline constexpr int kMaxCodedIndex = 100;

enum class FamilyKind { QuadraticReal, CoefficientPair, ComplexCoefficient, LandauPlane };
enum class Engine { Roots, Winding };

inline const char* to_string(FamilyKind k) noexcept {
  switch (k) {
    case FamilyKind::QuadraticReal: return "QuadraticReal";
    case FamilyKind::CoefficientPair: return "CoefficientPair";
    case FamilyKind::ComplexCoefficient: return "ComplexCoefficient";
    case FamilyKind::LandauPlane: return "LandauPlane";
  }
  return "?";
}

inline const char* to_string(Engine e) noexcept { return e == Engine::Roots ? "roots" : "winding"; }

inline Engine engine_from_string(const std::string& s) {
  if (s == "roots" || s == "Roots") return Engine::Roots;
  if (s == "winding" || s == "Winding") return Engine::Winding;
  throw InvalidArgument("unknown engine '" + s + "' (expected roots or winding)");
}

/// Two-parameter family of symbols over the (x, y) plane.
///
/// QuadraticReal: z^2 + x z + y.
/// CoefficientPair: template with coefficient of z^vary[0] set to x and of
///   z^vary[1] set to y (real values).
/// ComplexCoefficient: template with coefficient of z^vary[0] set to x + iy.
/// LandauPlane: (x, y) = (B, E); evaluated by the Landau adapter, not here.
struct ParamFamily {
  FamilyKind kind = FamilyKind::QuadraticReal;
  LaurentPolynomial tmpl;
  std::vector<int> vary;

  void validate() const {
    auto in_range = [this](int e) { return e >= tmpl.lowest_exponent() && e <= tmpl.highest_exponent(); };
    switch (kind) {
      case FamilyKind::QuadraticReal:
      case FamilyKind::LandauPlane:
        return;
      case FamilyKind::CoefficientPair:
        if (vary.size() != 2) throw InvalidArgument("CoefficientPair needs exactly two varied exponents");
        if (vary[0] == vary[1]) throw InvalidArgument("CoefficientPair exponents must differ");
        break;
      case FamilyKind::ComplexCoefficient:
        if (vary.size() != 1) throw InvalidArgument("ComplexCoefficient needs exactly one varied exponent");
        break;
    }
    if (tmpl.is_zero()) throw InvalidArgument("family template is empty");
    for (int e : vary)
      if (!in_range(e))
        throw InvalidArgument("varied exponent " + std::to_string(e) + " outside template range [" +
                              std::to_string(tmpl.lowest_exponent()) + ", " +
                              std::to_string(tmpl.highest_exponent()) + "]");
  }

  LaurentPolynomial at(double x, double y) const {
    switch (kind) {
      case FamilyKind::QuadraticReal:
        return {0, {cplx{y}, cplx{x}, cplx{1.0}}};
      case FamilyKind::CoefficientPair:
      case FamilyKind::ComplexCoefficient: {
        auto c = tmpl.coeffs();
        const int m = tmpl.pole_order();
        if (kind == FamilyKind::CoefficientPair) {
          c[static_cast<std::size_t>(vary[0] + m)] = x;
          c[static_cast<std::size_t>(vary[1] + m)] = y;
        } else {
          c[static_cast<std::size_t>(vary[0] + m)] = cplx{x, y};
        }
        return {m, std::move(c)};
      }
      case FamilyKind::LandauPlane:
        break;
    }
    throw InvalidArgument("LandauPlane family has no polynomial symbol");
  }

  friend bool operator==(const ParamFamily&, const ParamFamily&) = default;
};

inline ParamFamily quadratic_family() { return {}; }

struct GridSpec {
  double x_min = 0.0, x_max = 1.0;
  int nx = 2;
  double y_min = 0.0, y_max = 1.0;
  int ny = 2;
  Engine engine = Engine::Roots;

  void validate() const {
    if (nx < 2 || ny < 2) throw InvalidArgument("grid needs nx, ny >= 2");
    if (x_max < x_min || y_max < y_min) throw InvalidArgument("grid max below min");
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(y_min) || !std::isfinite(y_max))
      throw InvalidArgument("grid bounds must be finite");
  }
  double dx() const noexcept { return (x_max - x_min) / nx; }
  double dy() const noexcept { return (y_max - y_min) / ny; }
  double x(int i) const noexcept { return x_min + (i + 0.5) * dx(); }
  double y(int j) const noexcept { return y_min + (j + 0.5) * dy(); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct Provenance {
  std::string engine;
  double band = kDefaultBand;
  double vanish_tol = kDefaultVanishTol;
  std::string timestamp;  // empty unless the caller stamps it

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// ny x nx raster of cell codes. cells[j * nx + i] is the cell at
/// (x(i), y(j)); row j = 0 is y_min.
struct PhaseGrid {
  GridSpec spec;
  std::vector<std::int8_t> cells;
  ParamFamily family;
  Provenance provenance;

  std::int8_t at(int i, int j) const { return cells[static_cast<std::size_t>(j) * spec.nx + i]; }

  friend bool operator==(const PhaseGrid&, const PhaseGrid&) = default;
};

inline bool is_sentinel(std::int8_t code) noexcept { return code == kCodeMarginal || code == kCodeEngineError; }

inline std::int8_t code_of(const IndexResult& r) noexcept {
  if (!r.fredholm() || !r.index) return kCodeMarginal;
  if (*r.index < -kMaxCodedIndex || *r.index > kMaxCodedIndex) return kCodeEngineError;
  return static_cast<std::int8_t>(*r.index);
}

struct SweepOptions {
  double band = kDefaultBand;
  double vanish_tol = kDefaultVanishTol;
  unsigned threads = 0;  // 0: FREDHOLM_THREADS or hardware concurrency
  std::string timestamp;
};

/// Evaluates cell(x, y) -> IndexResult at every cell centre. Exceptions from
/// a cell become kCodeEngineError; the sweep itself never aborts.
template <class CellFn>
PhaseGrid sweep_cells(const ParamFamily& family, const GridSpec& spec, const SweepOptions& opt, CellFn&& cell,
                      std::string engine_name) {
  spec.validate();
  family.validate();
  PhaseGrid g;
  g.spec = spec;
  g.family = family;
  g.provenance = {std::move(engine_name), opt.band, opt.vanish_tol, opt.timestamp};
  g.cells.assign(static_cast<std::size_t>(spec.nx) * spec.ny, kCodeEngineError);
  parallel_for(static_cast<std::size_t>(spec.ny), resolve_threads(opt.threads), [&](std::size_t j) {
    const double y = spec.y(static_cast<int>(j));
    for (int i = 0; i < spec.nx; ++i) {
      std::int8_t code = kCodeEngineError;
      try {
        code = code_of(cell(spec.x(i), y));
      } catch (const std::exception&) {
        code = kCodeEngineError;
      }
      g.cells[j * static_cast<std::size_t>(spec.nx) + static_cast<std::size_t>(i)] = code;
    }
  });
  return g;
}

/// Index of the shift polynomial p by the chosen engine.
inline IndexResult evaluate_engine(const LaurentPolynomial& p, Engine engine, double band, double vanish_tol) {
  if (engine == Engine::Roots) return index_shift_poly(p, band);
  WindingOptions w;
  w.vanish_tol = vanish_tol;
  return toeplitz_index(symbol_of_shift_poly(normalize(p)), w);
}

inline PhaseGrid sweep(const ParamFamily& family, const GridSpec& spec, const SweepOptions& opt = {}) {
  if (family.kind == FamilyKind::LandauPlane)
    throw InvalidArgument("sweep: LandauPlane grids are produced by the Landau adapter");
  const Engine engine = spec.engine;
  return sweep_cells(
      family, spec, opt,
      [&](double x, double y) { return evaluate_engine(family.at(x, y), engine, opt.band, opt.vanish_tol); },
      to_string(engine));
}

// ---------------------------------------------------------------------------
// Boundary geometry.

struct BoundaryPair {
  int i1, j1, i2, j2;
  int jump;
};

/// 4-neighbour pairs with distinct non-sentinel codes.
inline std::vector<BoundaryPair> boundary_pairs(const PhaseGrid& g) {
  std::vector<BoundaryPair> out;
  const int nx = g.spec.nx, ny = g.spec.ny;
  auto consider = [&](int i1, int j1, int i2, int j2) {
    const auto a = g.at(i1, j1), b = g.at(i2, j2);
    if (is_sentinel(a) || is_sentinel(b) || a == b) return;
    out.push_back({i1, j1, i2, j2, std::abs(static_cast<int>(a) - static_cast<int>(b))});
  };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (i + 1 < nx) consider(i, j, i + 1, j);
      if (j + 1 < ny) consider(i, j, i, j + 1);
    }
  return out;
}

struct BoundaryReport {
  std::map<int, std::size_t> adjacent_jump_histogram;
  double marginal_fraction = 0.0;
};

inline BoundaryReport boundary_report(const PhaseGrid& g) {
  BoundaryReport r;
  for (const auto& p : boundary_pairs(g)) ++r.adjacent_jump_histogram[p.jump];
  const auto marginal = std::count(g.cells.begin(), g.cells.end(), kCodeMarginal);
  r.marginal_fraction = g.cells.empty() ? 0.0 : static_cast<double>(marginal) / static_cast<double>(g.cells.size());
  return r;
}

// ---------------------------------------------------------------------------
// Serialization.

enum class GridFormat { Csv, Json, Pgm };

inline GridFormat grid_format_from_string(const std::string& s) {
  if (s == "csv") return GridFormat::Csv;
  if (s == "json") return GridFormat::Json;
  if (s == "pgm") return GridFormat::Pgm;
  throw InvalidArgument("unknown format '" + s + "' (expected csv, json or pgm)");
}

inline FamilyKind family_kind_from_string(const std::string& s) {
  if (s == "QuadraticReal" || s == "quadratic") return FamilyKind::QuadraticReal;
  if (s == "CoefficientPair") return FamilyKind::CoefficientPair;
  if (s == "ComplexCoefficient") return FamilyKind::ComplexCoefficient;
  if (s == "LandauPlane" || s == "landau") return FamilyKind::LandauPlane;
  throw InvalidArgument("unknown family kind '" + s + "'");
}

inline nlohmann::json to_json_value(const ParamFamily& f) {
  nlohmann::json j = {{"kind", to_string(f.kind)}, {"vary", f.vary}};
  j["template"] = to_json_value(f.tmpl);
  return j;
}

/// {"kind": ..., "template": <laurent>, "vary": [exponents], "fixed": {"<exponent>": [re, im]}}.
/// "fixed" entries overwrite template coefficients.
inline ParamFamily family_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw InvalidArgument("family JSON needs a string \"kind\"");
  ParamFamily f;
  f.kind = family_kind_from_string(j["kind"].get<std::string>());
  if (j.contains("template")) f.tmpl = laurent_from_json(j["template"]);
  if (j.contains("vary")) {
    if (!j["vary"].is_array()) throw InvalidArgument("\"vary\" must be an array of exponents");
    for (const auto& e : j["vary"]) {
      if (!e.is_number_integer()) throw InvalidArgument("\"vary\" entries must be integers");
      f.vary.push_back(e.get<int>());
    }
  }
  if (j.contains("fixed")) {
    if (!j["fixed"].is_object()) throw InvalidArgument("\"fixed\" must be an object");
    for (const auto& [key, value] : j["fixed"].items()) {
      int e = 0;
      try {
        e = std::stoi(key);
      } catch (const std::exception&) {
        throw InvalidArgument("\"fixed\" key '" + key + "' is not an exponent");
      }
      f.tmpl = add(f.tmpl, LaurentPolynomial::monomial(e, complex_from_json(value) - f.tmpl.coeff(e)));
    }
  }
  f.validate();
  return f;
}

inline nlohmann::json to_json_value(const GridSpec& s) {
  return {{"x_min", s.x_min}, {"x_max", s.x_max}, {"nx", s.nx},         {"y_min", s.y_min},
          {"y_max", s.y_max}, {"ny", s.ny},       {"engine", to_string(s.engine)}};
}

inline GridSpec grid_spec_from_json(const nlohmann::json& j) {
  try {
    GridSpec s;
    s.x_min = j.at("x_min").get<double>();
    s.x_max = j.at("x_max").get<double>();
    s.nx = j.at("nx").get<int>();
    s.y_min = j.at("y_min").get<double>();
    s.y_max = j.at("y_max").get<double>();
    s.ny = j.at("ny").get<int>();
    if (j.contains("engine")) s.engine = engine_from_string(j["engine"].get<std::string>());
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("grid spec JSON: ") + e.what());
  }
}

/// "x_min,x_max,nx,y_min,y_max,ny".
inline GridSpec grid_spec_from_string(const std::string& text, Engine engine = Engine::Roots) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  if (parts.size() != 6) throw InvalidArgument("grid must be x_min,x_max,nx,y_min,y_max,ny, got '" + text + "'");
  GridSpec s;
  try {
    s.x_min = std::stod(parts[0]);
    s.x_max = std::stod(parts[1]);
    s.nx = std::stoi(parts[2]);
    s.y_min = std::stod(parts[3]);
    s.y_max = std::stod(parts[4]);
    s.ny = std::stoi(parts[5]);
  } catch (const std::exception&) {
    throw InvalidArgument("grid has a non-numeric field: '" + text + "'");
  }
  s.engine = engine;
  s.validate();
  return s;
}

inline nlohmann::json to_json_value(const PhaseGrid& g) {
  nlohmann::json rows = nlohmann::json::array();
  for (int j = 0; j < g.spec.ny; ++j) {
    nlohmann::json row = nlohmann::json::array();
    for (int i = 0; i < g.spec.nx; ++i) row.push_back(static_cast<int>(g.at(i, j)));
    rows.push_back(std::move(row));
  }
  return {{"spec", to_json_value(g.spec)},
          {"family", to_json_value(g.family)},
          {"provenance",
           {{"engine", g.provenance.engine},
            {"band", g.provenance.band},
            {"vanish_tol", g.provenance.vanish_tol},
            {"timestamp", g.provenance.timestamp}}},
          {"row_order", "y_min_first"},
          {"cells", rows}};
}

inline PhaseGrid phase_grid_from_json(const nlohmann::json& j) {
  try {
    PhaseGrid g;
    g.spec = grid_spec_from_json(j.at("spec"));
    g.family = family_from_json(j.at("family"));
    const auto& p = j.at("provenance");
    g.provenance = {p.at("engine").get<std::string>(), p.at("band").get<double>(), p.at("vanish_tol").get<double>(),
                    p.at("timestamp").get<std::string>()};
    const auto& rows = j.at("cells");
    if (!rows.is_array() || static_cast<int>(rows.size()) != g.spec.ny)
      throw InvalidArgument("cells must have ny rows");
    for (const auto& row : rows) {
      if (!row.is_array() || static_cast<int>(row.size()) != g.spec.nx)
        throw InvalidArgument("each cells row must have nx entries");
      for (const auto& v : row) g.cells.push_back(static_cast<std::int8_t>(v.get<int>()));
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("phase grid JSON: ") + e.what());
  }
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Header "# x_min,x_max,nx,y_min,y_max,ny" (values), then ny rows from y_max down.
inline void write_csv(const PhaseGrid& g, std::ostream& out) {
  const auto& s = g.spec;
  out << "# " << format_double(s.x_min) << ',' << format_double(s.x_max) << ',' << s.nx << ','
      << format_double(s.y_min) << ',' << format_double(s.y_max) << ',' << s.ny << '\n';
  for (int j = s.ny - 1; j >= 0; --j) {
    for (int i = 0; i < s.nx; ++i) {
      if (i) out << ',';
      out << static_cast<int>(g.at(i, j));
    }
    out << '\n';
  }
}

inline int pgm_gray(std::int8_t code) noexcept {
  if (code == kCodeMarginal) return 0;
  if (code == kCodeEngineError) return 255;
  return std::clamp(128 + 16 * static_cast<int>(code), 0, 255);
}

/// Plain P2, row 0 = y_max.
inline void write_pgm(const PhaseGrid& g, std::ostream& out) {
  const auto& s = g.spec;
  out << "P2\n" << s.nx << ' ' << s.ny << "\n255\n";
  for (int j = s.ny - 1; j >= 0; --j) {
    for (int i = 0; i < s.nx; ++i) {
      if (i) out << ' ';
      out << pgm_gray(g.at(i, j));
    }
    out << '\n';
  }
}

inline void write_grid(const PhaseGrid& g, GridFormat fmt, std::ostream& out) {
  switch (fmt) {
    case GridFormat::Csv: write_csv(g, out); break;
    case GridFormat::Json: out << to_json_value(g).dump() << '\n'; break;
    case GridFormat::Pgm: write_pgm(g, out); break;
  }
}

inline void write_grid(const PhaseGrid& g, GridFormat fmt, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_grid(g, fmt, out);
  out.flush();
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace fredholm
