#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "sovlat/bracket.hpp"
#include "sovlat/monodromy.hpp"

using namespace sovlat;

namespace {

MuPattern mask(int n, std::initializer_list<int> bits) {
  MuPattern p{n, {}};
  for (int b : bits) p.free.push_back(static_cast<std::uint8_t>(b));
  return p;
}

MonodromyClass cls(int n, int m, int n1, int n2) { return {n, m, n1, n2, std::nullopt}; }

}  // namespace

TEST(Monodromy, MuPatternExamples) {
  EXPECT_EQ(mu_pattern(3, MuKind::Minus, 1), mask(3, {0, 0, 0, 1, 1, 0, 1, 1, 1}));
  EXPECT_EQ(mu_pattern(2, MuKind::Plus, 2), mask(2, {0, 1, 0, 0}));
  EXPECT_EQ(mu_pattern(3, MuKind::PlusZero, 0), mask(3, {1, 1, 1, 1, 1, 1, 0, 1, 1}));
  EXPECT_EQ(mu_pattern(3, MuKind::MinusZero, 0), mask(3, {1, 1, 0, 1, 1, 1, 1, 1, 1}));
  EXPECT_EQ(mu_pattern(3, MuKind::Minus, 2), mask(3, {0, 0, 0, 0, 0, 0, 1, 1, 0}));
  EXPECT_EQ(mu_pattern(3, MuKind::Plus, 1), mask(3, {1, 1, 1, 0, 1, 1, 0, 0, 1}));
  EXPECT_THROW(mu_pattern(2, MuKind::MinusZero, 0), std::invalid_argument);
  EXPECT_THROW(mu_pattern(3, MuKind::Minus, 3), std::invalid_argument);
}

TEST(Monodromy, BuildTBranches) {
  // N=2, m=2: mu_-^(1) z^2 + mu_1 z + mu_+^(1).
  auto p = block_patterns(cls(2, 2, 1, 1));
  EXPECT_EQ(p[2], mu_pattern(2, MuKind::Minus, 1));
  EXPECT_EQ(p[1], mu_pattern(2, MuKind::Full));
  EXPECT_EQ(p[0], mu_pattern(2, MuKind::Plus, 1));
  // N=3, m=1, (2,2): (mu_-^(2) & mu_+^(-1)) z + (mu_-^(0) & mu_+^(2)).
  auto q = block_patterns(cls(3, 1, 2, 2));
  // mu_+^(-1) is undefined at N=3, so the full pattern takes its place.
  EXPECT_EQ(q[1], mu_pattern(3, MuKind::Minus, 2));
  EXPECT_EQ(q[0], mu_pattern(3, MuKind::MinusZero, 0) & mu_pattern(3, MuKind::Plus, 2));

  std::mt19937_64 rng(4);
  auto c = cls(3, 3, 1, 2);
  auto coeffs = random_exact_coefficients(c, rng);
  auto t = build_T<GaussRational>(c, coeffs);
  EXPECT_EQ(t.degree(), 3);
  auto at0 = t.coefficient(0);
  for (int r = 0; r < 3; ++r)
    for (int col = 0; col < 3; ++col)
      EXPECT_EQ(!at0(r, col).is_zero(), mu_pattern(3, MuKind::Plus, 2).is_free(r, col));
  coeffs.pop_back();
  EXPECT_THROW(build_T<GaussRational>(c, coeffs), std::invalid_argument);
}

TEST(Monodromy, ClassifyExamples) {
  std::mt19937_64 rng(8);
  auto c1 = cls(2, 2, 1, 1);
  auto f1 = char_poly(build_T<GaussRational>(c1, random_exact_coefficients(c1, rng)));
  auto fs = curve_coefficients(f1, 2);
  EXPECT_EQ(fs[0].degree(), 2);
  EXPECT_EQ(fs[0].order(), 0);
  EXPECT_EQ(classify_F(f1, 2), c1);

  auto c2 = cls(3, 2, 2, 2);
  auto f2 = char_poly(build_T<GaussRational>(c2, random_exact_coefficients(c2, rng)));
  auto gs = curve_coefficients(f2, 3);
  EXPECT_EQ(gs[1].degree(), 3);
  EXPECT_EQ(gs[1].order(), 1);
  EXPECT_EQ(classify_F(f2, 3), c2);

  BiPoly<GaussRational> bad;
  bad.add_term(0, 2, GaussRational(1));
  bad.add_term(0, 0, GaussRational(1));
  EXPECT_THROW(classify_F(bad, 2), std::domain_error);
}

TEST(Monodromy, ClassifyIsLeftInverseOfBuild) {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int n = 2; n <= 4; ++n)
    for (int m = 1; m <= 3; ++m)
      for (int n1 = 1; n1 <= n - 1; ++n1)
        for (int n2 = 1; n2 <= n; ++n2) {
          if (n == 4 && m == 3) continue;  // covered by the round trip below at lower cost
          auto c = cls(n, m, n1, n2);
          if (!class_is_admissible(c)) {
            EXPECT_EQ(m, 1) << c.str();
            continue;
          }
          auto f = char_poly(build_T<GaussRational>(c, random_exact_coefficients(c, rng)));
          auto fs = curve_coefficients(f, n);
          EXPECT_EQ(fs[n - 2].degree(), (n - 1) * m - n1 + 1) << c.str();
          EXPECT_EQ(fs[n - 2].order(), n2 - 1) << c.str();
          EXPECT_EQ(classify_F(f, n), c) << c.str();
          ++checked;
        }
  EXPECT_GT(checked, 40);
}

TEST(Monodromy, ClassifyRoundTripRandomInstances) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> pick_n(2, 4), pick_m(1, 3);
  for (int trial = 0; trial < 100; ++trial) {
    int n = pick_n(rng);
    int m = pick_m(rng);
    std::uniform_int_distribution<int> p1(1, n - 1), p2(1, n);
    auto c = cls(n, m, p1(rng), p2(rng));
    if (!class_is_admissible(c)) continue;
    auto f = char_poly(build_T<GaussRational>(c, random_exact_coefficients(c, rng)));
    EXPECT_EQ(classify_F(f, n), c) << c.str();
  }
}

TEST(Monodromy, LocalLax) {
  auto s = lax_structure(2, 1);
  auto l = local_lax(2, 1, s);
  EXPECT_TRUE(l(0, 0).is_zero());
  EXPECT_EQ(l(0, 1), UniPoly<LaurentPoly>(LaurentPoly::generator(1)));
  EXPECT_EQ(l(1, 0), UniPoly<LaurentPoly>::monomial(LaurentPoly::generator(2), 1));
  EXPECT_EQ(l(1, 1), UniPoly<LaurentPoly>::monomial(LaurentPoly::generator(0), 1));
  EXPECT_EQ(l.det(), UniPoly<LaurentPoly>::monomial(-(LaurentPoly::generator(1) * LaurentPoly::generator(2)), 1));

  auto s3 = lax_structure(3, 1);
  auto l3 = local_lax(3, 1, s3);
  EXPECT_EQ(l3(0, 1).degree(), 0);
  EXPECT_EQ(l3(1, 2).degree(), 0);
  EXPECT_EQ(l3(2, 0).degree(), 1);
  EXPECT_EQ(l3(2, 1).degree(), 1);
}

TEST(Monodromy, LaxProductClassExamples) {
  EXPECT_EQ(lax_product_class(3, 1), cls(3, 1, 2, 2));
  EXPECT_EQ(lax_product_class(2, 5), cls(2, 3, 1, 2));
  EXPECT_EQ(lax_product_class(3, 7), cls(3, 2, 2, 2));
  EXPECT_EQ(lax_product_class(3, 12), cls(3, 2, 1, 1));
  EXPECT_EQ(lax_product_class(3, 9), cls(3, 2, 2, 1));
  auto c = lax_product_class(3, 11);
  ASSERT_TRUE(c.lattice.has_value());
  EXPECT_EQ(c.lattice->m2, 3);
  EXPECT_EQ(c.lattice->k1, 1);
}

TEST(Monodromy, LaxProductClassFormulaMatchesBruteForce) {
  for (int n = 2; n <= 4; ++n)
    for (int l = 1; l <= 20; ++l) {
      MonodromyClass f = lax_product_class_formula(n, l);
      MonodromyClass b = lax_product_class_bruteforce(n, l, 7 + l);
      EXPECT_EQ(f, b) << "N=" << n << " L=" << l << " formula " << f.str() << " product " << b.str();
    }
}

TEST(Monodromy, CommutationExamples) {
  auto s1 = lax_structure(2, 1);
  EXPECT_TRUE(verify_commutation(local_lax(2, 1, s1), s1).passed());
  auto s = lax_structure(2, 4);
  auto rep = verify_commutation(symbolic_lax_product(2, 4, s), s);
  EXPECT_TRUE(rep.passed());
  EXPECT_GT(rep.involution_pairs, 0u);
  auto s3 = lax_structure(3, 7);
  EXPECT_TRUE(verify_commutation(symbolic_lax_product(3, 7, s3), s3).passed());
}

TEST(Monodromy, RttResidualOfAssembledProducts) {
  for (int n = 2; n <= 3; ++n)
    for (int l = 1; l <= (n == 2 ? 8 : 6); ++l) {
      auto s = lax_structure(n, l);
      EXPECT_TRUE(matrix_bracket_residual(symbolic_lax_product(n, l, s), s).is_zero())
          << "N=" << n << " L=" << l;
    }
}
