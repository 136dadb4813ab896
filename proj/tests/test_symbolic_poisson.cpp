#include <gtest/gtest.h>

#include <random>

#include "sovlat/bracket.hpp"
#include "sovlat/monodromy.hpp"

using namespace sovlat;

namespace {

LaurentPoly gen(int i) { return LaurentPoly::generator(i); }

LaurentPoly random_laurent(int gens, std::mt19937_64& rng, int terms = 3) {
  std::uniform_int_distribution<int> e(-2, 2), c(-5, 5), g(0, gens - 1);
  std::vector<LaurentPoly::Term> t;
  for (int k = 0; k < terms; ++k) {
    Monomial m;
    for (int j = 0; j < 3; ++j) m.e[g(rng)] = static_cast<std::int8_t>(e(rng));
    int coeff = c(rng);
    if (coeff == 0) coeff = 1;
    t.push_back({m, Rational(coeff)});
  }
  return LaurentPoly::from_terms(t);
}

}  // namespace

TEST(SymbolicPoisson, LvStructureExamples) {
  auto s = lv_structure(2, 4);
  EXPECT_EQ(bracket(gen(0), gen(1), s), (gen(0) * gen(1)).scaled(2));
  EXPECT_TRUE(bracket(gen(0), gen(2), s).is_zero());
  EXPECT_EQ(bracket(gen(0), gen(3), s), (gen(0) * gen(3)).scaled(-2));
  for (int n = 0; n < 4; ++n) EXPECT_TRUE(bracket(gen(n), gen(n), s).is_zero());

  auto s3 = lv_structure(3, 7);
  EXPECT_EQ(bracket(gen(0), gen(2), s3), (gen(0) * gen(2)).scaled(2));
  EXPECT_EQ(bracket(gen(0), gen(5), s3), (gen(0) * gen(5)).scaled(-2));

  EXPECT_THROW(lv_structure(3, 4), std::invalid_argument);
}

TEST(SymbolicPoisson, P0CommutesWithEverything) {
  for (auto [n, l] : {std::pair{2, 5}, std::pair{3, 7}}) {
    auto s = lv_structure(n, l);
    LaurentPoly p0 = gen(s.p0_index());
    for (int k = 0; k < l; ++k) EXPECT_TRUE(bracket(p0, gen(k), s).is_zero());
  }
}

TEST(SymbolicPoisson, PqStructureExamples) {
  auto s = pq_structure(3);
  LaurentPoly p1 = gen(0), q1 = gen(3), q2 = gen(4);
  EXPECT_TRUE(bracket(p1, q2, s).is_zero());
  EXPECT_EQ(bracket(p1, q1, s), p1 * q1);
  EXPECT_EQ(bracket(q1, p1, s), -(p1 * q1));
}

TEST(SymbolicPoisson, LaxStructureExamples) {
  auto s = lax_structure(3, 2);
  auto l = [](int site, int k) { return gen((site - 1) * 4 + k); };
  EXPECT_TRUE(bracket(l(1, 1), l(1, 2), s).is_zero());
  EXPECT_TRUE(bracket(l(1, 0), l(2, 1), s).is_zero());
  EXPECT_EQ(bracket(l(1, 0), l(1, 3), s), l(1, 0) * l(1, 3));
  EXPECT_EQ(bracket(l(1, 0), l(1, 1), s), -(l(1, 0) * l(1, 1)));
}

TEST(SymbolicPoisson, BracketExamples) {
  auto s = lv_structure(2, 4);
  LaurentPoly h1 = gen(0) + gen(1) + gen(2) + gen(3);
  EXPECT_TRUE(bracket(h1, gen(0) * gen(2), s).is_zero());
  EXPECT_TRUE(bracket(h1, h1, s).is_zero());
  EXPECT_EQ(bracket(gen(0), h1, s), (gen(0) * gen(1)).scaled(2) - (gen(0) * gen(3)).scaled(2));
}

TEST(SymbolicPoisson, AntisymmetryLeibnizJacobi) {
  auto s = lv_structure(3, 6);
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    LaurentPoly f = random_laurent(6, rng), g = random_laurent(6, rng), h = random_laurent(6, rng);
    EXPECT_EQ(bracket(f, g, s), -bracket(g, f, s));
    EXPECT_EQ(bracket(f * g, h, s), f * bracket(g, h, s) + bracket(f, h, s) * g);
    LaurentPoly jac = bracket(f, bracket(g, h, s), s) + bracket(g, bracket(h, f, s), s) +
                      bracket(h, bracket(f, g, s), s);
    EXPECT_TRUE(jac.is_zero());
  }
}

TEST(SymbolicPoisson, ReduceP0) {
  auto s = lv_structure(2, 3);
  int p = s.p0_index();
  // P0^5 -> P0 * (V1 V2 V3)^(-2)
  LaurentPoly f = LaurentPoly::generator(p, 5);
  Monomial expect = Monomial::unit(p);
  for (int i = 0; i < 3; ++i) expect.e[i] = -2;
  EXPECT_EQ(reduce_p0(f, s), LaurentPoly(expect, Rational(1)));
  LaurentPoly g = LaurentPoly::generator(p, -1);
  Monomial e2 = Monomial::unit(p, 1);
  for (int i = 0; i < 3; ++i) e2.e[i] = 1;
  EXPECT_EQ(reduce_p0(g, s), LaurentPoly(e2, Rational(1)));
}

TEST(SymbolicPoisson, RttResidualSingleSites) {
  for (int n = 2; n <= 4; ++n) {
    auto s = lax_structure(n, 1);
    auto res = matrix_bracket_residual(local_lax(n, 1, s), s);
    EXPECT_TRUE(res.is_zero()) << "N=" << n << " nonzero entries " << res.nonzero_entries();
  }
}

TEST(SymbolicPoisson, RttResidualProducts) {
  for (auto [n, l] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}, std::pair{3, 4}}) {
    auto s = lax_structure(n, l);
    auto res = matrix_bracket_residual(symbolic_lax_product(n, l, s), s);
    EXPECT_TRUE(res.is_zero()) << "N=" << n << " L=" << l;
  }
}

TEST(SymbolicPoisson, RttResidualDetectsWrongBracket) {
  // Flipping the sign of one Lax bracket must break the relation.
  auto good = lax_structure(2, 1);
  std::vector<int> c(9, 0);
  c[0 * 3 + 1] = 1;
  c[1 * 3 + 0] = -1;
  c[0 * 3 + 2] = 1;
  c[2 * 3 + 0] = -1;
  BracketStructure bad(good.names(), c);
  auto res = matrix_bracket_residual(local_lax(2, 1, good), bad);
  EXPECT_FALSE(res.is_zero());
}
