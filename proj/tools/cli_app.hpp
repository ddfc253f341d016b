#pragma once

// Command-line surface: subcommands over the index engines, the phase-diagram
// writers and the Hall models. JSON results go to `out`, logs to `err`.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <fredholm/fredholm.hpp>

#include "acceptance_suite.hpp"

namespace fredholm::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kNotFredholm = 2, kNonConvergence = 3 };

inline constexpr std::uint64_t kDefaultSeed = 20240611;

namespace detail {

inline int status_exit(const IndexResult& r) { return r.fredholm() ? kOk : kNotFredholm; }

inline std::string utc_stamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline GridFormat format_for(const std::string& format, const std::string& path) {
  if (!format.empty()) return grid_format_from_string(format);
  const auto dot = path.rfind('.');
  if (dot != std::string::npos) {
    const std::string ext = path.substr(dot + 1);
    if (ext == "csv" || ext == "json" || ext == "pgm") return grid_format_from_string(ext);
  }
  return GridFormat::Pgm;
}

// Grid argument: "x_min,x_max,nx,y_min,y_max,ny", inline JSON or a JSON file.
inline GridSpec parse_grid(const std::string& arg, Engine engine) {
  const auto first = arg.find_first_not_of(" \t");
  if (first != std::string::npos && arg[first] != '{' && arg.find(',') != std::string::npos)
    return grid_spec_from_string(arg, engine);
  GridSpec s = grid_spec_from_json(load_json_arg(arg));
  s.engine = engine;
  return s;
}

// Family argument: a kind name, inline JSON or a JSON file.
inline ParamFamily parse_family(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t");
  if (first != std::string::npos && arg[first] != '{' && arg.find('.') == std::string::npos &&
      arg.find('/') == std::string::npos) {
    ParamFamily f;
    f.kind = family_kind_from_string(arg);
    f.validate();
    return f;
  }
  return family_from_json(load_json_arg(arg));
}

inline void emit_grid(const PhaseGrid& g, const std::string& path, const std::string& format, std::ostream& out,
                      std::ostream& err) {
  const GridFormat fmt = format_for(format, path);
  if (path.empty() || path == "-") {
    write_grid(g, fmt, out);
    return;
  }
  write_grid(g, fmt, path);
  const BoundaryReport rep = boundary_report(g);
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [jump, count] : rep.adjacent_jump_histogram) hist[std::to_string(jump)] = count;
  out << nlohmann::json{{"out", path},
                        {"nx", g.spec.nx},
                        {"ny", g.spec.ny},
                        {"engine", g.provenance.engine},
                        {"jump_histogram", hist},
                        {"marginal_fraction", rep.marginal_fraction}}
             .dump(2)
      << '\n';
  err << "wrote " << path << '\n';
}

// Config values become tokens placed right after the subcommand name, so
// anything given on the command line (parsed later) wins.
inline std::vector<std::string> config_tokens(const nlohmann::json& cfg, const std::string& sub, CLI::App& app,
                                              std::ostream& err) {
  std::vector<std::string> tokens;
  CLI::App* sc = app.get_subcommand_no_throw(sub);
  if (sc == nullptr) return tokens;
  auto add = [&](const std::string& key, const nlohmann::json& v, bool strict) {
    const CLI::Option* opt = sc->get_option_no_throw("--" + key);
    if (opt == nullptr) opt = app.get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config") {
      if (strict) err << "config: ignoring unknown key '" << key << "' for " << sub << '\n';
      return;
    }
    if (v.is_boolean()) {
      if (v.get<bool>()) tokens.push_back("--" + key);
      return;
    }
    tokens.push_back("--" + key);
    if (v.is_string())
      tokens.push_back(v.get<std::string>());
    else
      tokens.push_back(v.dump());
  };
  for (const auto& [key, v] : cfg.items())
    if (!v.is_object() || app.get_subcommand_no_throw(key) == nullptr) add(key, v, false);
  if (cfg.contains(sub) && cfg[sub].is_object())
    for (const auto& [key, v] : cfg[sub].items()) add(key, v, true);
  return tokens;
}

}  // namespace detail

struct Settings {
  std::string config;
  unsigned threads = 0;
  std::uint64_t seed = kDefaultSeed;

  std::string coeffs;
  double band = kDefaultBand;

  std::string symbol, fourier, csv;
  double vanish_tol = kDefaultVanishTol;
  long n0 = 8;

  std::string family = "quadratic";
  std::string grid;
  std::string engine = "roots";
  std::string out;
  std::string format;
  bool stamp = false;

  int qmax = 0;
  int kgrid = 64;
  double gap_tol = hall::kDefaultGapTol;

  std::optional<double> B, E;
  double landau_tol = hall::kDefaultLandauTol;

  std::optional<long> m, mmax;
};

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Fredholm index engines, phase diagrams and Hall models", "fredholm"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--config", s.config, "JSON config: flat keys or one object per subcommand");
  app.add_option("--threads", s.threads, "worker threads (0: FREDHOLM_THREADS or hardware)");
  app.add_option("--seed", s.seed, "seed for randomized suites");

  auto* index_poly = app.add_subcommand("index-poly", "index of p(a) for a Laurent polynomial in the shift");
  index_poly->add_option("--coeffs", s.coeffs, "Laurent JSON, inline or path")->required();
  index_poly->add_option("--band", s.band, "root-on-circle band")->check(CLI::PositiveNumber);

  auto* winding = app.add_subcommand("winding", "winding number and Toeplitz index of a circle symbol");
  auto* o_sym = winding->add_option("--symbol", s.symbol, "Laurent JSON, inline or path");
  auto* o_fou = winding->add_option("--fourier", s.fourier, "Fourier coefficients, Laurent JSON layout");
  auto* o_csv = winding->add_option("--csv", s.csv, "sampled symbol: theta,re,im rows");
  o_sym->excludes(o_fou)->excludes(o_csv);
  o_fou->excludes(o_csv);
  winding->add_option("--vanish-tol", s.vanish_tol, "modulus below which the symbol counts as vanishing")
      ->check(CLI::PositiveNumber);
  winding->add_option("--n0", s.n0, "initial sample count (power of two >= 8)");

  auto* phase = app.add_subcommand("phase-diagram", "index over a 2-parameter family");
  phase->add_option("--family", s.family, "kind name, or family JSON inline or path");
  phase->add_option("--grid", s.grid, "x_min,x_max,nx,y_min,y_max,ny or grid JSON");
  phase->add_option("--engine", s.engine, "roots or winding");
  phase->add_option("--band", s.band, "root-on-circle band")->check(CLI::PositiveNumber);
  phase->add_option("--vanish-tol", s.vanish_tol, "winding engine vanish tolerance")->check(CLI::PositiveNumber);
  phase->add_option("--out", s.out, "output path (stdout if omitted)");
  phase->add_option("--format", s.format, "csv, json or pgm (default from extension, else pgm)");
  phase->add_flag("--stamp", s.stamp, "record a UTC timestamp in the provenance");

  auto* bfly = app.add_subcommand("butterfly", "Harper bands and gap labels for all p/q with q <= qmax");
  bfly->add_option("--qmax", s.qmax, "largest denominator")->required();
  bfly->add_option("--kgrid", s.kgrid, "k-grid points per direction");
  bfly->add_option("--gap-tol", s.gap_tol, "gap open threshold")->check(CLI::PositiveNumber);
  bfly->add_option("--out", s.out, "CSV path (stdout if omitted)");

  auto* landau = app.add_subcommand("landau", "Landau Hall index at a point or over a (B, E) raster");
  landau->add_option("--B", s.B, "field");
  landau->add_option("--E", s.E, "Fermi energy");
  landau->add_option("--grid", s.grid, "B_min,B_max,nB,E_min,E_max,nE or grid JSON");
  landau->add_option("--tol", s.landau_tol, "level tolerance")->check(CLI::PositiveNumber);
  landau->add_option("--out", s.out, "output path (stdout if omitted)");
  landau->add_option("--format", s.format, "csv, json or pgm");
  landau->add_flag("--stamp", s.stamp, "record a UTC timestamp in the provenance");

  auto* pup = app.add_subcommand("pup", "lowest-Landau-level PUP matrix elements");
  auto* o_m = pup->add_option("--m", s.m, "single level");
  auto* o_mmax = pup->add_option("--mmax", s.mmax, "table for m = 0..mmax");
  o_m->excludes(o_mmax);

  auto* selftest = app.add_subcommand("selftest", "run the acceptance criteria");

  // First pass only locates --config and the subcommand.
  std::vector<std::string> argv = args;
  std::string sub;
  std::string config_path;
  for (std::size_t i = 0; i < argv.size(); ++i) {
    if (sub.empty() && app.get_subcommand_no_throw(argv[i]) != nullptr) sub = argv[i];
    if (argv[i] == "--config" && i + 1 < argv.size()) config_path = argv[i + 1];
    if (argv[i].rfind("--config=", 0) == 0) config_path = argv[i].substr(9);
  }

  try {
    if (!config_path.empty() && !sub.empty()) {
      const nlohmann::json cfg = load_json_arg(config_path);
      if (!cfg.is_object()) throw InvalidArgument("config must be a JSON object");
      const auto tokens = detail::config_tokens(cfg, sub, app, err);
      const auto at = std::find(argv.begin(), argv.end(), sub);
      argv.insert(at + 1, tokens.begin(), tokens.end());
    }
    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (*index_poly) {
      const auto r = index_shift_poly(laurent_from_json(load_json_arg(s.coeffs)), s.band);
      out << to_json_value(r).dump(2) << '\n';
      return detail::status_exit(r);
    }

    if (*winding) {
      std::optional<CircleSymbol> f;
      if (!s.symbol.empty()) f.emplace(laurent_from_json(load_json_arg(s.symbol)));
      if (!s.fourier.empty()) f.emplace(fourier_from_json(load_json_arg(s.fourier)));
      if (!s.csv.empty()) f.emplace(sampled_from_csv_file(s.csv));
      if (!f) throw InvalidArgument("winding: one of --symbol, --fourier, --csv is required");
      WindingOptions wo;
      wo.n0 = s.n0;
      wo.vanish_tol = s.vanish_tol;
      const auto r = toeplitz_index(*f, wo);
      out << to_json_value(r).dump(2) << '\n';
      return detail::status_exit(r);
    }

    if (*phase) {
      const ParamFamily fam = detail::parse_family(s.family);
      const Engine engine = engine_from_string(s.engine);
      const bool is_landau = fam.kind == FamilyKind::LandauPlane;
      const std::string grid = !s.grid.empty() ? s.grid : is_landau ? "-2,2,401,0,10,401" : "-3,3,601,-2,2,401";
      const GridSpec spec = detail::parse_grid(grid, engine);
      SweepOptions so{s.band, s.vanish_tol, s.threads, s.stamp ? detail::utc_stamp() : std::string{}};
      err << "sweeping " << spec.nx << "x" << spec.ny << " cells with " << resolve_threads(s.threads)
          << " thread(s)\n";
      const PhaseGrid g = is_landau ? hall::landau_sweep(spec, so) : sweep(fam, spec, so);
      detail::emit_grid(g, s.out, s.format, out, err);
      return kOk;
    }

    if (*bfly) {
      hall::HarperOptions ho;
      ho.gap_tol = s.gap_tol;
      const auto rows = hall::butterfly(s.qmax, s.kgrid, s.threads, ho);
      if (s.out.empty() || s.out == "-") {
        hall::write_butterfly_csv(rows, out);
        return kOk;
      }
      hall::write_butterfly_csv(rows, s.out);
      out << nlohmann::json{{"out", s.out}, {"qmax", s.qmax}, {"kgrid", s.kgrid}, {"rows", rows.size()}}.dump(2)
          << '\n';
      err << "wrote " << s.out << '\n';
      return kOk;
    }

    if (*landau) {
      if (s.B.has_value() != s.E.has_value()) throw InvalidArgument("landau: give both --B and --E, or neither");
      if (s.B) {
        const auto r = hall::landau_index(*s.B, *s.E, s.landau_tol);
        auto j = to_json_value(r);
        j["B"] = *s.B;
        j["E"] = *s.E;
        out << j.dump(2) << '\n';
        return detail::status_exit(r);
      }
      const GridSpec spec = detail::parse_grid(s.grid.empty() ? "-2,2,401,0,10,401" : s.grid, Engine::Roots);
      SweepOptions so;
      so.threads = s.threads;
      if (s.stamp) so.timestamp = detail::utc_stamp();
      detail::emit_grid(hall::landau_sweep(spec, so, s.landau_tol), s.out, s.format, out, err);
      return kOk;
    }

    if (*pup) {
      if (s.m) {
        const auto e = hall::pup_matrix_element(*s.m);
        out << nlohmann::json{{"m", e.m}, {"value", e.value}}.dump(2) << '\n';
        return kOk;
      }
      if (!s.mmax) throw InvalidArgument("pup: one of --m, --mmax is required");
      if (*s.mmax < 0 || *s.mmax > hall::kMaxPupLevel) throw InvalidArgument("pup: need 0 <= mmax <= 1e6");
      nlohmann::json table = nlohmann::json::array();
      for (long m = 0; m <= *s.mmax; ++m) {
        const auto e = hall::pup_matrix_element(m);
        table.push_back({{"m", e.m}, {"value", e.value}});
      }
      nlohmann::json j{{"mmax", *s.mmax}, {"table", table}};
      if (*s.mmax >= 1) j["compact_deviation"] = hall::pup_compact_deviation(*s.mmax);
      out << j.dump(2) << '\n';
      return kOk;
    }

    if (*selftest) {
      acceptance::Options ao;
      ao.seed = s.seed;
      ao.threads = s.threads;
      nlohmann::json results = nlohmann::json::array();
      bool all = true;
      for (const auto& c : acceptance::all_criteria()) {
        const auto o = c(ao);
        err << acceptance::format(o) << '\n';
        results.push_back({{"id", o.id}, {"name", o.name}, {"passed", o.passed}, {"detail", o.detail},
                           {"seconds", o.seconds}});
        all = all && o.passed;
      }
      out << nlohmann::json{{"passed", all}, {"seed", s.seed}, {"criteria", results}}.dump(2) << '\n';
      return all ? kOk : kInputError;
    }
  } catch (const VanishingSymbol& e) {
    err << "not Fredholm: " << e.what() << '\n';
    return kNotFredholm;
  } catch (const NonConvergence& e) {
    err << "non-convergence: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const Unresolved& e) {
    err << "unresolved: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const Inconclusive& e) {
    err << "inconclusive: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace fredholm::cli
