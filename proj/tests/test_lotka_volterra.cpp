#include <gtest/gtest.h>

#include <cmath>

#include "sovlat/gauge_sov.hpp"
#include "sovlat/lotka_volterra.hpp"
#include "sovlat/newton.hpp"

using namespace sovlat;

namespace {

LaurentPoly var(int i) { return LaurentPoly::generator(i); }

std::vector<int> lv_matrix(const BracketStructure& s, int l) {
  std::vector<int> c(std::size_t(l) * l);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) c[i * l + j] = s.coefficient(i, j);
  return c;
}

MuPattern observed_pattern(const PolyMatrix<LaurentPoly>& t, int p) {
  MuPattern out{t.size(), {}};
  const auto coeff = t.coefficient(p);
  for (const auto& e : coeff.entries()) out.free.push_back(e.is_zero() ? 0 : 1);
  return out;
}

PolyMatrix<Complex> realized(int n, const std::vector<double>& v) {
  std::vector<Complex> c(v.begin(), v.end());
  return lv_monodromy<Complex>(n, std::span<const Complex>(c));
}

}  // namespace

TEST(LotkaVolterra, Validation) {
  EXPECT_THROW(validate_lv(1, 5), std::invalid_argument);
  EXPECT_THROW(validate_lv(2, 2), std::invalid_argument);
  EXPECT_THROW(validate_lv(3, 4), std::invalid_argument);
  EXPECT_NO_THROW(validate_lv(3, 5));
}

TEST(LotkaVolterra, TraceProfileFor2x4) {
  auto s = lv_structure(2, 4);
  auto t = build_t_lv(2, 4, s);
  auto f = curve_coefficients(char_poly(t), 2);
  LaurentPoly p0 = var(s.p0_index());
  LaurentPoly sum = var(0) + var(1) + var(2) + var(3);
  LaurentPoly c0 = var(0) * var(2) + var(1) * var(3);
  EXPECT_EQ(f[0].degree(), 2);
  EXPECT_EQ(f[0].coeff(2), p0);
  EXPECT_EQ(f[0].coeff(1), -(p0 * sum));
  EXPECT_EQ(f[0].coeff(0), p0 * c0);
}

TEST(LotkaVolterra, DeterminantIsPowerOfZ) {
  for (int n = 2; n <= 3; ++n)
    for (int l = 2 * n - 1; l <= 12; ++l) {
      SCOPED_TRACE("N=" + std::to_string(n) + " L=" + std::to_string(l));
      auto s = lv_structure(n, l);
      auto d = build_t_lv(n, l, s).det();
      int k2 = lattice_integers(n, l).k2;
      ASSERT_EQ(d.degree(), k2);
      for (int p = 0; p < k2; ++p) EXPECT_TRUE(d.coeff(p).is_zero());
      EXPECT_EQ(reduce_p0(d.coeff(k2), s), LaurentPoly(Rational(1)));
    }
}

TEST(LotkaVolterra, ZeroPatternMatchesClass) {
  for (int n = 2; n <= 3; ++n)
    for (int l = 2 * n - 1; l <= 12; ++l) {
      SCOPED_TRACE("N=" + std::to_string(n) + " L=" + std::to_string(l));
      auto s = lv_structure(n, l);
      auto t = build_t_lv(n, l, s);
      auto cls = lax_product_class(n, l);
      auto expected = block_patterns(cls);
      ASSERT_EQ(t.degree(), cls.m);
      for (int p = 0; p <= cls.m; ++p) EXPECT_EQ(observed_pattern(t, p), expected[p]) << "z^" << p;
    }
  auto cls = lax_product_class(3, 7);
  EXPECT_EQ(cls.m, 2);
  EXPECT_EQ(cls.n1, 2);
  EXPECT_EQ(cls.n2, 2);
}

TEST(LotkaVolterra, FirstIntegralAndCentralConstantFor2x4) {
  auto s = lv_structure(2, 4);
  auto im = extract_im(2, 4, s, build_t_lv(2, 4, s));
  ASSERT_EQ(im.n_H(), 1);
  EXPECT_EQ(im.im[0].value, var(0) + var(1) + var(2) + var(3));
  EXPECT_EQ(im.im[0].degree, 1);
  EXPECT_EQ(im.im[0].raw_sign, -1);
  bool found = false;
  for (const auto& c : im.central) found = found || c.value == var(0) * var(2) + var(1) * var(3);
  EXPECT_TRUE(found);
}

TEST(LotkaVolterra, EvenChainHasMMinusOneIntegrals) {
  for (int m = 2; m <= 7; ++m) {
    auto s = lv_structure(2, 2 * m);
    EXPECT_EQ(extract_im(2, 2 * m, s, build_t_lv(2, 2 * m, s)).n_H(), m - 1) << "m=" << m;
  }
}

TEST(LotkaVolterra, IntegralsAreOrderedHomogeneousAndSignNormalized) {
  for (auto [n, l] : {std::pair{2, 9}, {3, 8}, {3, 11}}) {
    auto s = lv_structure(n, l);
    auto im = extract_im(n, l, s, build_t_lv(n, l, s));
    for (std::size_t i = 0; i < im.im.size(); ++i) {
      int d = 0;
      EXPECT_TRUE(im.im[i].value.is_homogeneous(l, d));
      EXPECT_EQ(d, im.im[i].degree);
      EXPECT_GT(im.im[i].value.terms().front().coeff, 0);
      EXPECT_GT(im.im[i].value.terms().front().mono.e[0], 0);
      if (i > 0) EXPECT_LE(im.im[i - 1].degree, im.im[i].degree);
    }
  }
}

TEST(LotkaVolterra, CentralCoefficientsFor3x6) {
  auto s = lv_structure(3, 6);
  auto im = extract_im(3, 6, s, build_t_lv(3, 6, s));
  EXPECT_EQ(im.n_H(), 1);
  for (const auto& c : im.central)
    for (int k = 0; k < 6; ++k) EXPECT_TRUE(bracket(c.value, var(k), s).is_zero());
}

TEST(LotkaVolterra, ExtractionRefusesBeyondCaps) {
  auto s = lv_structure(3, 13);
  EXPECT_THROW(extract_im(3, 13, s, build_t_lv(3, 13, s)), OutOfScopeError);
  EXPECT_TRUE(symbolic_within_caps(2, 14));
  EXPECT_FALSE(symbolic_within_caps(2, 15));
  EXPECT_TRUE(symbolic_within_caps(3, 12));
  EXPECT_FALSE(symbolic_within_caps(4, 12));
}

TEST(LotkaVolterra, CenterExamples) {
  auto a = center_spec(2, 4);
  EXPECT_EQ(a.K, (std::vector<int>{1, 2}));
  EXPECT_EQ(a.n0, 2);
  auto b = center_spec(2, 5);
  EXPECT_EQ(b.K, (std::vector<int>{1}));
  EXPECT_EQ(b.n0, 1);
  auto c = center_spec(3, 6);
  EXPECT_EQ(c.n0, 4);
  EXPECT_EQ(c.generators.size(), 5u);  // P_3^(1..3), P_2^(1..2), one product relation
  EXPECT_EQ(center_generator(6, 3, 2), var(1) * var(4));
}

TEST(LotkaVolterra, InvolutionAndCenter) {
  for (int n = 2; n <= 3; ++n)
    for (int l = 2 * n - 1; l <= (n == 2 ? 10 : 9); ++l) {
      SCOPED_TRACE("N=" + std::to_string(n) + " L=" + std::to_string(l));
      auto s = lv_structure(n, l);
      auto im = extract_im(n, l, s, build_t_lv(n, l, s));
      for (std::size_t i = 0; i < im.im.size(); ++i)
        for (std::size_t j = i + 1; j < im.im.size(); ++j)
          EXPECT_TRUE(bracket(im.im[i].value, im.im[j].value, s).is_zero()) << i << "," << j;
      for (const auto& g : center_spec(n, l).generators)
        for (int k = 0; k < l; ++k) EXPECT_TRUE(bracket(var(k), g.value, s).is_zero());
      EXPECT_TRUE(center_sharpness(n, l).sharp);
    }
}

TEST(LotkaVolterra, CenterSharpnessFindsNonCentralProducts) {
  EXPECT_TRUE(center_sharpness(3, 9).non_central_k.empty());
  auto a = center_sharpness(5, 9);
  EXPECT_EQ(a.non_central_k, (std::vector<int>{3}));
  EXPECT_TRUE(a.sharp);
  auto b = center_sharpness(5, 12);
  EXPECT_EQ(b.non_central_k, (std::vector<int>{3}));
  EXPECT_TRUE(b.sharp);
  EXPECT_EQ(center_spec(5, 12).K, (std::vector<int>{1, 2, 4}));
}

TEST(LotkaVolterra, PqRealization) {
  auto pq = pq_structure(4);
  auto v1 = pq_v(2, 4, 1), v2 = pq_v(2, 4, 2), v3 = pq_v(2, 4, 3);
  EXPECT_EQ(bracket(v1, v2, pq), (v1 * v2).scaled(Rational(2)));
  EXPECT_TRUE(bracket(v1, v3, pq).is_zero());
  EXPECT_TRUE(bracket(v1, v1, pq).is_zero());
  for (int n = 2; n <= 3; ++n)
    for (int l = 2 * n - 1; l <= 10; ++l) {
      auto rep = pq_realization_check(n, l);
      EXPECT_TRUE(rep.passed()) << "N=" << n << " L=" << l;
      EXPECT_EQ(rep.pairs, l * l);
    }
}

TEST(LotkaVolterra, GenusTables) {
  std::vector<int> n2{1, 1, 2, 2, 3, 3, 4, 4, 5, 5};
  auto t2 = genus_table(2, 3, 12);
  ASSERT_EQ(t2.size(), n2.size());
  for (std::size_t i = 0; i < n2.size(); ++i) EXPECT_EQ(t2[i].g, n2[i]) << "L=" << t2[i].L;
  std::vector<int> n3{2, 1, 3, 3, 3, 4, 5, 4, 6, 6, 6, 7, 8};
  auto t3 = genus_table(3, 5, 17);
  ASSERT_EQ(t3.size(), n3.size());
  for (std::size_t i = 0; i < n3.size(); ++i) EXPECT_EQ(t3[i].g, n3[i]) << "L=" << t3[i].L;
}

TEST(LotkaVolterra, NumericAndSymbolicIntegralCountsAgree) {
  for (int n = 2; n <= 3; ++n)
    for (int l = 2 * n - 1; l <= (n == 2 ? 12 : 10); ++l) {
      auto s = lv_structure(n, l);
      EXPECT_EQ(numeric_im_count(n, l), extract_im(n, l, s, build_t_lv(n, l, s)).n_H()) << n << "," << l;
    }
}

TEST(LotkaVolterra, CertifyTableRows) {
  for (int l = 3; l <= 12; ++l) {
    auto c = certify(2, l);
    EXPECT_TRUE(c.passed) << "N=2 L=" << l << " g=" << c.g << " n_H=" << c.n_H << " n0=" << c.n0;
  }
  for (int l = 5; l <= 17; ++l) {
    auto c = certify(3, l);
    EXPECT_TRUE(c.passed) << "N=3 L=" << l << " g=" << c.g << " n_H=" << c.n_H << " n0=" << c.n0;
    EXPECT_EQ(c.symbolic_n_H, l <= 12);
  }
  auto c36 = certify(3, 6);
  EXPECT_EQ(c36.g, 1);
  EXPECT_EQ(c36.n0, 4);
  EXPECT_EQ(c36.n_H, 1);
  auto c311 = certify(3, 11);
  EXPECT_EQ(c311.cls.n1, 2);
  EXPECT_EQ(c311.cls.n2, 3);
  EXPECT_EQ(c311.g, 5);
  EXPECT_THROW(certify(4, 13), OutOfScopeError);
}

TEST(LotkaVolterra, FirstFlowIsBogoyavlensky) {
  for (auto [n, l] : {std::pair{2, 5}, {2, 6}, {3, 7}, {3, 9}}) {
    auto m = make_lv_model(n, l);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto v = random_positive_state(l, seed);
      auto a = m.flow_field(1, v);
      auto b = bogoyavlensky_rhs(n, v);
      for (int k = 0; k < l; ++k) EXPECT_NEAR(a[k], b[k], 1e-13 * (1 + std::abs(b[k])));
    }
    EXPECT_THROW(m.flow_field(0, random_positive_state(l, 1)), std::out_of_range);
    EXPECT_THROW(m.flow_field(m.im.n_H() + 1, random_positive_state(l, 1)), std::out_of_range);
  }
}

TEST(LotkaVolterra, SecondFlowMatchesFiniteDifferenceGradient) {
  auto m = make_lv_model(2, 6);
  ASSERT_GE(m.im.n_H(), 2);
  auto v = random_positive_state(6, 3);
  auto field = m.flow_field(2, v);
  std::vector<double> grad(6);
  const double h = 1e-7;
  for (int k = 0; k < 6; ++k) {
    auto vp = v;
    vp[k] += h;
    grad[k] = (m.im_values(vp)[1] - m.im_values(v)[1]) / h;
  }
  for (int a = 0; a < 6; ++a) {
    double expect = 0;
    for (int b = 0; b < 6; ++b) expect += m.s.coefficient(a, b) * v[a] * v[b] * grad[b];
    EXPECT_NEAR(field[a], expect, 1e-6 * (1 + std::abs(expect)));
  }
}

TEST(LotkaVolterra, FlowUnchangedByCentralShift) {
  auto m = make_lv_model(2, 6);
  auto v = random_positive_state(6, 4);
  auto shifted = m.im.im[0].value + m.center.generators[0].value;
  for (int k = 0; k < 6; ++k) {
    double a = m.flow_field(1, v)[k];
    double b = EvalPlan(bracket(var(k), shifted, m.s))(std::span<const double>(v));
    EXPECT_NEAR(a, b, 1e-14);
  }
}

TEST(LotkaVolterra, FixedPointGivesConstantTrajectory) {
  auto m = make_lv_model(2, 6);
  std::vector<double> v(6, 0.8);
  auto tr = integrate(m, 1, v, 1.0, 1e-2);
  ASSERT_FALSE(tr.aborted);
  for (const auto& x : tr.v)
    for (int k = 0; k < 6; ++k) EXPECT_EQ(x[k], 0.8);
}

TEST(LotkaVolterra, ConservationAlongFlows) {
  for (auto [n, l] : {std::pair{2, 6}, {3, 7}}) {
    auto m = make_lv_model(n, l);
    auto tr = integrate(m, 1, random_positive_state(l, 11), 10.0, 1e-3);
    EXPECT_FALSE(tr.aborted) << tr.diagnostic;
    EXPECT_EQ(tr.t.size(), 10001u);
    EXPECT_LE(tr.max_drift_h, 1e-8);
    EXPECT_LE(tr.max_drift_center, 1e-8);
    EXPECT_LE(tr.max_drift_curve, 1e-8);
  }
  auto m = make_lv_model(2, 6);
  auto tr = integrate(m, 2, random_positive_state(6, 12), 2.0, 1e-3, Method::Dopri5);
  EXPECT_FALSE(tr.aborted) << tr.diagnostic;
  EXPECT_LE(tr.max_drift_h, 1e-9);
  EXPECT_LE(tr.max_drift_curve, 1e-9);
}

TEST(LotkaVolterra, IntegrationAbortsNearZero) {
  auto m = make_lv_model(2, 5);
  std::vector<double> v{1.0, 1e-13, 1.0, 1.0, 1.0};
  auto tr = integrate(m, 1, v, 1.0, 1e-2);
  EXPECT_TRUE(tr.aborted);
  EXPECT_NE(tr.diagnostic.find("below"), std::string::npos);
  EXPECT_THROW(integrate(m, 1, v, 1.0, 0.0), std::invalid_argument);
}

TEST(LotkaVolterra, SeparationRootFor2x4) {
  std::vector<double> v{1, 2, 3, 4};
  auto t = realized(2, v);
  auto f = char_poly(t);
  auto d = divisor(t, lax_product_class(2, 4), f);
  ASSERT_EQ(d.points.size(), 1u);
  // With T = M_L ... M_1 the root is V_1 + V_2.
  EXPECT_NEAR(std::abs(d.points[0].z - Complex(3.0)), 0.0, 1e-12);
  EXPECT_LE(std::abs(f.eval_complex(d.points[0].z, d.points[0].w)), 1e-9);
}

TEST(LotkaVolterra, DivisorOnCurveAndGaugeInvariant) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (auto [n, l] : {std::pair{2, 6}, {3, 7}}) {
    auto cls = lax_product_class(n, l);
    auto v = random_positive_state(l, 21);
    auto t = realized(n, v);
    auto f = char_poly(t);
    auto d = divisor(t, cls, f);
    EXPECT_EQ(static_cast<int>(d.points.size()), lv_genus(n, l));
    EXPECT_LE(d.max_residual, 1e-9);
    auto rm = apply_gauge(t, gauge_recipe(cls));
    EXPECT_LE(divisor_distance(d, divisor(rm.M, cls, f)), 1e-10);
    SquareMatrix<Complex> diag(n), inv(n);
    for (int i = 0; i < n; ++i) {
      diag(i, i) = u(rng);
      inv(i, i) = 1.0 / diag(i, i);
    }
    EXPECT_LE(divisor_distance(d, divisor(diag * t * inv, cls, f)), 1e-10);
  }
}

TEST(LotkaVolterra, CanonicalSeparatedVariables) {
  for (auto [n, l] : {std::pair{2, 6}, {3, 7}}) {
    auto s = lv_structure(n, l);
    RealizedMonodromy t = [n](std::span<const Dual> x) { return lv_monodromy<Dual>(n, x); };
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      auto rep = canonical_bracket_check(lax_product_class(n, l), lv_matrix(s, l), random_positive_state(l, seed), t);
      EXPECT_EQ(rep.roots, lv_genus(n, l));
      EXPECT_TRUE(rep.passed(1e-6)) << "N=" << n << " L=" << l << " dev=" << rep.max_deviation();
    }
  }
}

TEST(LotkaVolterra, AbelVelocitiesAreFlat) {
  for (auto [n, l] : {std::pair{2, 5}, {2, 6}, {3, 7}}) {
    auto m = make_lv_model(n, l);
    auto v0 = random_positive_state(l, 31);
    auto f = char_poly(realized(n, v0));
    auto tr = integrate(m, 1, v0, 5.0, 1e-3);
    ASSERT_FALSE(tr.aborted);
    std::vector<Divisor> ds;
    for (const auto& v : tr.v) ds.push_back(divisor(realized(n, v), m.cls, f));
    auto rep = abel_linearity_probe(tr.t, ds, f);
    EXPECT_FALSE(rep.truncated) << rep.diagnostic;
    EXPECT_LE(rep.worst(), 1e-6) << "N=" << n << " L=" << l;
  }
}
