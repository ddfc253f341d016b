#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <fredholm/phase_diagram.hpp>

#include "oracles.hpp"

using namespace fredholm;

namespace {

std::string to_text(const PhaseGrid& g, GridFormat fmt) {
  std::ostringstream out;
  write_grid(g, fmt, out);
  return out.str();
}

ParamFamily constant_family() {
  return family_from_json(parse_json_text(
      R"({"kind":"CoefficientPair","template":{"pole_order":0,"coeffs":[1,0,0]},"vary":[1,2]})", "family"));
}

}  // namespace

// The oracle itself is checked against the quadratic formula before use.
TEST(ClosedForm, MatchesQuadraticFormula) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> c1d(-3.0, 3.0), c0d(-2.0, 2.0);
  int checked = 0;
  while (checked < 20000) {
    const double c1 = c1d(rng), c0 = c0d(rng);
    if (oracle::quadratic_circle_distance(c1, c0) < 1e-9) continue;
    EXPECT_EQ(oracle::quadratic_closed_form_code(c1, c0), oracle::quadratic_inside_count(c1, c0))
        << c1 << "," << c0;
    ++checked;
  }
}

TEST(Sweep, QuadraticMatchesClosedForm) {
  const GridSpec spec{-3.0, 3.0, 121, -2.0, 2.0, 81, Engine::Roots};
  const auto g = sweep(quadratic_family(), spec);
  for (int j = 0; j < spec.ny; ++j)
    for (int i = 0; i < spec.nx; ++i) {
      if (oracle::quadratic_circle_distance(spec.x(i), spec.y(j)) <= 1e-6) continue;
      EXPECT_EQ(g.at(i, j), oracle::quadratic_closed_form_code(spec.x(i), spec.y(j)));
    }
}

TEST(Sweep, OriginCellIsTwo) {
  const GridSpec spec{-1.0, 1.0, 3, -1.0, 1.0, 3, Engine::Roots};
  EXPECT_EQ(sweep(quadratic_family(), spec).at(1, 1), 2);
}

TEST(Sweep, ConjugatePairSegmentIsMarginal) {
  // Row 50 of [0, 2] / 101 sits on c0 = 1.
  const GridSpec spec{-1.9, 1.9, 39, 0.0, 2.0, 101, Engine::Roots};
  const auto g = sweep(quadratic_family(), spec);
  for (int i = 0; i < spec.nx; ++i) EXPECT_EQ(g.at(i, 50), kCodeMarginal) << "c1=" << spec.x(i);
}

TEST(Sweep, ConstantFamilyHasNoBoundaries) {
  const GridSpec spec{-0.5, 0.5, 10, -0.5, 0.5, 10, Engine::Roots};
  const auto g = sweep(constant_family(), spec);
  const auto rep = boundary_report(g);
  EXPECT_TRUE(rep.adjacent_jump_histogram.empty());
  EXPECT_EQ(rep.marginal_fraction, 0.0);
}

TEST(Sweep, MarginalFractionShrinksWithResolution) {
  // Complex z + c0 over c0 in a square: the circle |c0| = 1 is codimension 1.
  const auto fam = family_from_json(parse_json_text(
      R"({"kind":"ComplexCoefficient","template":{"coeffs":[0,1]},"vary":[0]})", "family"));
  SweepOptions opt;
  opt.band = 1e-2;  // wide band so the boundary is visible at all
  const auto coarse = boundary_report(sweep(fam, {-2, 2, 101, -2, 2, 101, Engine::Roots}, opt));
  const auto fine = boundary_report(sweep(fam, {-2, 2, 201, -2, 2, 201, Engine::Roots}, opt));
  EXPECT_GT(coarse.marginal_fraction, 0.0);
  EXPECT_LT(fine.marginal_fraction, coarse.marginal_fraction);
}

TEST(Sweep, EngineAgreement) {
  const GridSpec roots{-3.0, 3.0, 121, -2.0, 2.0, 81, Engine::Roots};
  GridSpec wind = roots;
  wind.engine = Engine::Winding;
  const auto a = sweep(quadratic_family(), roots);
  const auto b = sweep(quadratic_family(), wind);
  int eligible = 0, agree = 0;
  for (int j = 0; j < roots.ny; ++j)
    for (int i = 0; i < roots.nx; ++i) {
      const auto p = quadratic_family().at(roots.x(i), roots.y(j));
      if (oracle::brute_min_modulus(p) <= 10 * kDefaultVanishTol) continue;
      ++eligible;
      if (a.at(i, j) == b.at(i, j) && !is_sentinel(a.at(i, j))) ++agree;
    }
  EXPECT_GE(agree, eligible * 999 / 1000);
  EXPECT_EQ(b.provenance.engine, "winding");
}

TEST(Sweep, QuadraticJumpSizes) {
  const GridSpec spec{-3.0, 3.0, 121, -2.0, 2.0, 81, Engine::Roots};
  const auto rep = boundary_report(sweep(quadratic_family(), spec));
  for (const auto& [jump, count] : rep.adjacent_jump_histogram) EXPECT_TRUE(jump == 1 || jump == 2);
  EXPECT_GT(rep.adjacent_jump_histogram.count(1), 0u);
  EXPECT_GT(rep.adjacent_jump_histogram.count(2), 0u);
}

TEST(Sweep, CellErrorsBecomeSentinel) {
  // Zero template at (0, 0) is a ZeroSymbol inside the engine.
  const auto fam = family_from_json(
      parse_json_text(R"({"kind":"CoefficientPair","template":{"coeffs":[1,1]},"vary":[0,1]})", "family"));
  const auto g = sweep(fam, {-0.1, 0.1, 3, -0.1, 0.1, 3, Engine::Roots});
  EXPECT_EQ(g.at(1, 1), kCodeEngineError);
}

TEST(Sweep, ThreadCountDoesNotChangeResult) {
  const GridSpec spec{-3.0, 3.0, 61, -2.0, 2.0, 41, Engine::Roots};
  SweepOptions one, four;
  one.threads = 1;
  four.threads = 4;
  EXPECT_EQ(sweep(quadratic_family(), spec, one), sweep(quadratic_family(), spec, four));
}

TEST(Codes, Mapping) {
  IndexResult r;
  r.status = Status::Fredholm;
  r.index = 3;
  EXPECT_EQ(code_of(r), 3);
  r.index = -100;
  EXPECT_EQ(code_of(r), -100);
  r.index = 101;
  EXPECT_EQ(code_of(r), kCodeEngineError);
  r.status = Status::NumericallyMarginal;
  r.index.reset();
  EXPECT_EQ(code_of(r), kCodeMarginal);
  EXPECT_EQ(pgm_gray(0), 128);
  EXPECT_EQ(pgm_gray(2), 160);
  EXPECT_EQ(pgm_gray(-9), 0);
  EXPECT_EQ(pgm_gray(8), 255);
  EXPECT_EQ(pgm_gray(kCodeMarginal), 0);
  EXPECT_EQ(pgm_gray(kCodeEngineError), 255);
}

TEST(Writers, TwoByTwoZeroPgm) {
  const auto g = sweep(constant_family(), {0, 1, 2, 0, 1, 2, Engine::Roots});
  EXPECT_EQ(to_text(g, GridFormat::Pgm), "P2\n2 2\n255\n128 128\n128 128\n");
}

TEST(Writers, PgmRowOrderIsTopDown) {
  // QuadraticReal with c0 = y: bottom row (y = -1.5) has index 0, top (y = 0.5) has 2.
  const auto g = sweep(quadratic_family(), {-0.1, 0.1, 2, -2.0, 1.0, 2, Engine::Roots});
  EXPECT_EQ(to_text(g, GridFormat::Pgm), "P2\n2 2\n255\n160 160\n128 128\n");
}

TEST(Writers, CsvShape) {
  const GridSpec spec{-3.0, 3.0, 7, -2.0, 2.0, 5, Engine::Roots};
  const auto text = to_text(sweep(quadratic_family(), spec), GridFormat::Csv);
  std::istringstream in(text);
  std::string line;
  int rows = 0;
  std::getline(in, line);
  EXPECT_EQ(line, "# -3,3,7,-2,2,5");
  ++rows;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 6);
  }
  EXPECT_EQ(rows, spec.ny + 1);
}

TEST(Writers, CsvDeterministic) {
  const GridSpec spec{-3.0, 3.0, 41, -2.0, 2.0, 31, Engine::Winding};
  EXPECT_EQ(to_text(sweep(quadratic_family(), spec), GridFormat::Csv),
            to_text(sweep(quadratic_family(), spec), GridFormat::Csv));
}

TEST(Writers, JsonRoundTrip) {
  SweepOptions opt;
  opt.timestamp = "2024-01-01T00:00:00Z";
  const auto g = sweep(quadratic_family(), {-3.0, 3.0, 13, -2.0, 2.0, 9, Engine::Roots}, opt);
  const auto back = phase_grid_from_json(parse_json_text(to_text(g, GridFormat::Json), "grid"));
  EXPECT_EQ(back, g);
  const auto fam = constant_family();
  const auto g2 = sweep(fam, {0, 1, 3, 0, 1, 2, Engine::Winding});
  EXPECT_EQ(phase_grid_from_json(parse_json_text(to_text(g2, GridFormat::Json), "grid")), g2);
}

TEST(Writers, FileOutputAndIoError) {
  const auto g = sweep(constant_family(), {0, 1, 2, 0, 1, 2, Engine::Roots});
  const std::string path = ::testing::TempDir() + "grid_test.pgm";
  write_grid(g, GridFormat::Pgm, path);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "P2\n2 2\n255\n128 128\n128 128\n");
  std::remove(path.c_str());
  EXPECT_THROW(write_grid(g, GridFormat::Pgm, "/nonexistent/dir/x.pgm"), IoError);
}

TEST(FamilyJson, FixedOverridesTemplate) {
  const auto f = family_from_json(parse_json_text(
      R"({"kind":"CoefficientPair","template":{"pole_order":1,"coeffs":[1,0,1]},"vary":[0,1],"fixed":{"-1":[0,2]}})",
      "family"));
  EXPECT_EQ(f.tmpl.coeff(-1), cplx(0, 2));
  const auto p = f.at(0.5, 3.0);
  EXPECT_EQ(p.coeff(0), cplx(0.5));
  EXPECT_EQ(p.coeff(1), cplx(3.0));
}

TEST(FamilyJson, Errors) {
  auto parse = [](const char* text) { return family_from_json(parse_json_text(text, "family")); };
  EXPECT_THROW(parse(R"({"kind":"Nope"})"), InvalidArgument);
  EXPECT_THROW(parse(R"({"template":{"coeffs":[1]}})"), InvalidArgument);
  EXPECT_THROW(parse(R"({"kind":"CoefficientPair","template":{"coeffs":[1,1]},"vary":[0]})"), InvalidArgument);
  EXPECT_THROW(parse(R"({"kind":"CoefficientPair","template":{"coeffs":[1,1]},"vary":[0,5]})"), InvalidArgument);
  EXPECT_THROW(parse(R"({"kind":"CoefficientPair","template":{"coeffs":[1,1]},"vary":[1,1]})"), InvalidArgument);
  EXPECT_THROW(parse(R"({"kind":"ComplexCoefficient","template":{"coeffs":[1,1]},"vary":[0,1]})"),
               InvalidArgument);
  EXPECT_THROW(parse(R"({"kind":"ComplexCoefficient","vary":[0]})"), InvalidArgument);
  EXPECT_THROW(parse(R"({"kind":"CoefficientPair","template":{"coeffs":[1,1]},"vary":[0,1],"fixed":{"x":1}})"),
               InvalidArgument);
  EXPECT_EQ(parse(R"({"kind":"quadratic"})").kind, FamilyKind::QuadraticReal);
}

TEST(GridSpecParsing, Errors) {
  EXPECT_THROW(grid_spec_from_string("0,1,2,0,1"), InvalidArgument);
  EXPECT_THROW(grid_spec_from_string("0,1,1,0,1,2"), InvalidArgument);
  EXPECT_THROW(grid_spec_from_string("1,0,2,0,1,2"), InvalidArgument);
  EXPECT_THROW(grid_spec_from_string("0,a,2,0,1,2"), InvalidArgument);
  EXPECT_THROW(grid_spec_from_json(parse_json_text(R"({"x_min":0})", "grid")), InvalidArgument);
  EXPECT_THROW(engine_from_string("fast"), InvalidArgument);
  EXPECT_THROW(grid_format_from_string("png"), InvalidArgument);
  const auto s = grid_spec_from_string("-3,3,601,-2,2,401", Engine::Winding);
  EXPECT_EQ(s.nx, 601);
  EXPECT_EQ(s.engine, Engine::Winding);
  EXPECT_DOUBLE_EQ(s.x(0), -3.0 + 3.0 / 601);
}

TEST(Sweep, LandauFamilyRejectedByPolynomialSweep) {
  ParamFamily f;
  f.kind = FamilyKind::LandauPlane;
  EXPECT_THROW(sweep(f, {0, 1, 2, 0, 1, 2, Engine::Roots}), InvalidArgument);
}
