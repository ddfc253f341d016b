#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include <fredholm/index.hpp>
#include <fredholm/roots.hpp>

#include "oracles.hpp"

using namespace fredholm;

namespace {

bool has_root(const std::vector<Root>& roots, cplx z, int mult, double tol = 1e-12) {
  return std::any_of(roots.begin(), roots.end(),
                     [&](const Root& r) { return std::abs(r.value - z) <= tol && r.multiplicity == mult; });
}

int total_multiplicity(const std::vector<Root>& roots) {
  int n = 0;
  for (const auto& r : roots) n += r.multiplicity;
  return n;
}

}  // namespace

TEST(FindRoots, DifferenceOfSquares) {
  const auto r = find_roots(LaurentPolynomial(0, {-1.0, 0.0, 1.0}));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_TRUE(has_root(r, 1.0, 1));
  EXPECT_TRUE(has_root(r, -1.0, 1));
}

TEST(FindRoots, PurelyImaginaryPair) {
  const auto r = find_roots(LaurentPolynomial(0, {0.5, 0.0, 1.0}));
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_TRUE(has_root(r, cplx(0, s), 1));
  EXPECT_TRUE(has_root(r, cplx(0, -s), 1));
}

TEST(FindRoots, OriginReportedExplicitly) {
  // z^3 (z - 0.5)
  const auto r = find_roots(LaurentPolynomial(0, {0.0, 0.0, 0.0, -0.5, 1.0}));
  EXPECT_TRUE(has_root(r, 0.0, 3, 0.0));
  EXPECT_TRUE(has_root(r, 0.5, 1));
}

TEST(FindRoots, RandomDegreeEightMeetsResidualBound) {
  std::mt19937_64 rng(42);
  for (int k = 0; k < 200; ++k) {
    std::vector<cplx> c(9);
    for (auto& x : c) x = oracle::random_in_disk(rng);
    const LaurentPolynomial p(0, c);
    const auto roots = find_roots(p);
    EXPECT_EQ(total_multiplicity(roots), 8);
    for (const auto& r : roots) {
      // Residual re-evaluated here, independent of the iteration.
      cplx v = 0.0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * r.value + *it;
      double scale = 0.0;
      for (const auto& x : c) scale += std::abs(x);
      scale *= std::pow(std::max(1.0, std::abs(r.value)), 8);
      EXPECT_LE(std::abs(v), 1e-12 * scale);
    }
  }
}

TEST(FindRoots, MultiplicityByClustering) {
  const auto p = oracle::from_roots({0.5, 0.5, 0.5, cplx(0, 2)});
  const auto r = find_roots(p);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_TRUE(has_root(r, 0.5, 3, 1e-3));
  EXPECT_TRUE(has_root(r, cplx(0, 2), 1, 1e-10));
}

TEST(FindRoots, PrescribedRootsRecovered) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 50; ++k) {
    std::vector<cplx> want(6);
    for (auto& z : want) z = oracle::random_in_disk(rng, 2.0);
    const auto got = find_roots(oracle::from_roots(want));
    ASSERT_EQ(total_multiplicity(got), 6);
    for (const auto& z : want) {
      double best = 1e9;
      for (const auto& g : got) best = std::min(best, std::abs(g.value - z));
      EXPECT_LT(best, 1e-6);
    }
  }
}

TEST(FindRoots, Errors) {
  EXPECT_THROW(find_roots(LaurentPolynomial{}), ZeroSymbol);
  EXPECT_THROW(find_roots(LaurentPolynomial(0, {0.0, 0.0})), ZeroSymbol);
  RootOptions opt;
  opt.max_degree = 4;
  EXPECT_THROW(find_roots(LaurentPolynomial::monomial(5), opt), InvalidArgument);
}

TEST(ClassifyRoots, Examples) {
  auto rc = classify_roots({{0.5, 1}, {2.0, 1}}, 1e-8);
  EXPECT_EQ(rc.inside, 1);
  EXPECT_EQ(rc.on_circle, 0);
  EXPECT_EQ(rc.outside, 1);
  EXPECT_EQ(classify_roots({{1.0, 1}}, 1e-8).on_circle, 1);
  EXPECT_EQ(classify_roots({{1.0 + 5e-9, 1}}, 1e-8).on_circle, 1);
  EXPECT_EQ(classify_roots({{0.1, 3}}, 1e-8).inside, 3);
  EXPECT_THROW(classify_roots({}, 0.0), InvalidArgument);
}

TEST(ClassifyRoots, CountConservation) {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 100; ++k) {
    const auto p = normalize(oracle::random_laurent(rng, 8, 4));
    if (p.is_zero()) continue;
    const auto rc = classify_roots(find_roots(p), 1e-8);
    EXPECT_EQ(rc.total(), static_cast<int>(p.coeffs().size()) - 1);
  }
}

TEST(Index, ShiftAndAdjoint) {
  auto r = index_shift_poly(LaurentPolynomial::monomial(1));
  ASSERT_TRUE(r.fredholm());
  EXPECT_EQ(*r.index, 1);
  r = index_shift_poly(LaurentPolynomial::monomial(-1));
  ASSERT_TRUE(r.fredholm());
  EXPECT_EQ(*r.index, -1);
  EXPECT_EQ(r.certificate.pole_order, 1);
}

TEST(Index, ZeroOneTheorem) {
  EXPECT_EQ(*index_shift_poly(LaurentPolynomial(0, {1.0, 2.0})).index, 1);
  EXPECT_EQ(*index_shift_poly(LaurentPolynomial(0, {2.0, 1.0})).index, 0);
  const auto r = index_shift_poly(LaurentPolynomial(0, {1.0, 1.0}));
  EXPECT_EQ(r.status, Status::NumericallyMarginal);
  EXPECT_FALSE(r.index.has_value());
}

TEST(Index, DoubleRootInside) {
  const auto r = index_shift_poly(LaurentPolynomial(0, {0.25, 0.0, 1.0}));
  ASSERT_TRUE(r.fredholm());
  EXPECT_EQ(*r.index, 2);
  EXPECT_GT(r.certificate.min_modulus_on_circle, 0.0);
  EXPECT_LE(r.certificate.min_modulus_on_circle, oracle::brute_min_modulus(LaurentPolynomial(0, {0.25, 0.0, 1.0})));
}

TEST(Index, ZeroSymbol) { EXPECT_THROW(index_shift_poly(LaurentPolynomial{}), ZeroSymbol); }

TEST(Index, CertificateIsLowerBound) {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 100; ++k) {
    const auto p = oracle::random_laurent(rng, 6, 3);
    const auto r = index_shift_poly(p);
    if (!r.fredholm()) continue;
    EXPECT_GT(r.certificate.min_modulus_on_circle, 0.0);
    EXPECT_LE(r.certificate.min_modulus_on_circle, oracle::brute_min_modulus(p) * (1 + 1e-9) + 1e-12);
  }
}

TEST(IndexProperties, Additivity) {
  std::mt19937_64 rng(31);
  int checked = 0;
  while (checked < 200) {
    const auto p = oracle::random_laurent(rng, 5, 2), q = oracle::random_laurent(rng, 5, 2);
    if (oracle::brute_min_modulus(p) < 0.05 || oracle::brute_min_modulus(q) < 0.05) continue;
    const auto rp = index_shift_poly(p), rq = index_shift_poly(q), rpq = index_shift_poly(p * q);
    if (!rp.fredholm() || !rq.fredholm() || !rpq.fredholm()) continue;
    EXPECT_EQ(*rpq.index, *rp.index + *rq.index);
    ++checked;
  }
}

TEST(IndexProperties, AdjointAntisymmetry) {
  std::mt19937_64 rng(32);
  for (int k = 0; k < 200; ++k) {
    const auto p = oracle::random_laurent(rng, 6, 4);
    if (oracle::brute_min_modulus(p) < 0.05) continue;
    const auto r = index_shift_poly(p);
    const auto a = index_shift_poly(adjoint_symbol(p));
    ASSERT_TRUE(r.fredholm());
    ASSERT_TRUE(a.fredholm());
    EXPECT_EQ(*a.index, -*r.index);
  }
}

TEST(IndexProperties, ScaleInvariance) {
  std::mt19937_64 rng(33);
  for (int k = 0; k < 100; ++k) {
    const auto p = oracle::random_laurent(rng, 6, 3);
    if (oracle::brute_min_modulus(p) < 0.05) continue;
    const cplx lambda = std::polar(std::pow(10.0, (k % 9) - 4.0), 0.7 * k);
    EXPECT_EQ(*index_shift_poly(scale(p, lambda)).index, *index_shift_poly(p).index);
  }
}

TEST(IndexProperties, StabilityUnderSmallPerturbation) {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const auto p = oracle::random_laurent(rng, 6, 3);
    const auto r = index_shift_poly(p);
    if (!r.fredholm()) continue;
    const double radius = 0.99 * r.certificate.min_modulus_on_circle / static_cast<double>(p.coeffs().size());
    auto c = p.coeffs();
    for (auto& x : c) x += std::polar(radius * u(rng), kTwoPi * u(rng));
    const auto rq = index_shift_poly(LaurentPolynomial(p.pole_order(), c));
    ASSERT_TRUE(rq.fredholm());
    EXPECT_EQ(*rq.index, *r.index);
  }
}

TEST(Index, JsonShape) {
  const auto j = to_json_value(index_shift_poly(LaurentPolynomial::monomial(1)));
  EXPECT_EQ(j["status"], "Fredholm");
  EXPECT_EQ(j["index"], 1);
  EXPECT_TRUE(j["certificate"]["winding"].is_null());
  EXPECT_EQ(status_from_string("NotFredholm"), Status::NotFredholm);
  EXPECT_THROW(status_from_string("nope"), InvalidArgument);
}
