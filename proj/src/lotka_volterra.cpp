#include "sovlat/lotka_volterra.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "sovlat/gauge_sov.hpp"
#include "sovlat/newton.hpp"

namespace sovlat {

void validate_lv(int n, int l) {
  if (n < 2) throw std::invalid_argument("LV: N must be at least 2");
  if (l < 2 * n - 1)
    throw std::invalid_argument("LV: L must be at least 2N-1 (got N=" + std::to_string(n) + ", L=" +
                                std::to_string(l) + ")");
}

PolyMatrix<LaurentPoly> build_t_lv(int n, int l, const BracketStructure& s) {
  validate_lv(n, l);
  std::vector<LaurentPoly> v;
  for (int i = 0; i < l; ++i) v.push_back(LaurentPoly::generator(i));
  auto core = lv_monodromy_core<LaurentPoly>(n, v);
  LaurentPoly scale = LaurentPoly::generator(s.p0_index(), n - 1);
  return core.map_coeffs([&](const LaurentPoly& x) { return reduce_p0(scale * x, s); });
}

// ---------------------------------------------------------------------------

LaurentPoly center_generator(int l, int k, int i) {
  Monomial m;
  for (int j = 0; j < l / k; ++j) m.e[(k * j + i - 1) % l] += 1;
  return LaurentPoly(m, Rational(1));
}

namespace {

bool is_central(const LaurentPoly& f, const BracketStructure& s, int l) {
  for (int n = 0; n < l; ++n)
    if (!bracket(f, LaurentPoly::generator(n), s).is_zero()) return false;
  return true;
}

}  // namespace

CenterSpec center_spec(int n, int l) {
  validate_lv(n, l);
  auto s = lv_structure(n, l);
  CenterSpec c;
  c.N = n;
  c.L = l;
  int max_n = 0, max_n1 = 0;
  for (int k = 1; k <= n; ++k) {
    bool divides = n % k == 0 || (n - 1) % k == 0;
    if (!divides || l % k != 0) continue;
    c.K.push_back(k);
    if (n % k == 0) max_n = std::max(max_n, k);
    if ((n - 1) % k == 0) max_n1 = std::max(max_n1, k);
  }
  c.K0.push_back(max_n);
  if (max_n1 != max_n) c.K0.push_back(max_n1);
  std::sort(c.K0.begin(), c.K0.end());
  for (int k : c.K)
    for (int i = 1; i <= k; ++i)
      if (!is_central(center_generator(l, k, i), s, l))
        throw std::logic_error("center_spec: P_" + std::to_string(k) + "^(" + std::to_string(i) +
                               ") is not central");
  for (int k : c.K0)
    for (int i = 1; i <= k; ++i) c.generators.push_back({k, i, center_generator(l, k, i)});
  int sum = 0;
  for (int k : c.K0) sum += k;
  c.n0 = sum - (static_cast<int>(c.K0.size()) - 1);
  return c;
}

CenterSharpness center_sharpness(int n, int l) {
  auto center = center_spec(n, l);
  auto s = lv_structure(n, l);
  CenterSharpness out;
  for (int k = 1; k <= n; ++k) {
    if (l % k != 0 || std::count(center.K.begin(), center.K.end(), k)) continue;
    out.non_central_k.push_back(k);
    bool some = false;
    for (int i = 1; i <= k && !some; ++i) some = !is_central(center_generator(l, k, i), s, l);
    out.sharp = out.sharp && some;
  }
  return out;
}

// ---------------------------------------------------------------------------

bool symbolic_within_caps(int n, int l) {
  if (n == 2) return l <= 14;
  if (n == 3) return l <= 12;
  return false;
}

namespace {

// Drops P0 from every term; all terms must carry the same P0 power.
LaurentPoly strip_p0(const LaurentPoly& f, int p0) {
  std::vector<LaurentPoly::Term> out;
  std::optional<int> e;
  for (const auto& t : f.terms()) {
    if (e && *e != t.mono.e[p0]) throw std::logic_error("extract_im: mixed powers of P0 in a coefficient");
    e = t.mono.e[p0];
    Monomial m = t.mono;
    m.e[p0] = 0;
    out.push_back({m, t.coeff});
  }
  return LaurentPoly::from_terms(out);
}

// Multiplies by (prod V)^q with the least q that clears negative exponents.
LaurentPoly clear_denominators(const LaurentPoly& f, int l) {
  int low = 0;
  for (const auto& t : f.terms())
    for (int i = 0; i < l; ++i) low = std::min(low, int(t.mono.e[i]));
  if (low == 0) return f;
  Monomial m;
  for (int i = 0; i < l; ++i) m.e[i] = static_cast<std::int8_t>(-low);
  return f.times_monomial(m);
}

// f divided by its leading term, used to merge proportional coefficients.
LaurentPoly shape(const LaurentPoly& f) {
  const auto& lead = f.terms().front();
  Monomial inv;
  for (int i = 0; i < kMaxGenerators; ++i) inv.e[i] = static_cast<std::int8_t>(-lead.mono.e[i]);
  return f.times_monomial(inv).scaled(Rational(1) / lead.coeff);
}

}  // namespace

ImExtraction extract_im(int n, int l, const BracketStructure& s, const PolyMatrix<LaurentPoly>& t) {
  if (!symbolic_within_caps(n, l))
    throw OutOfScopeError("symbolic extraction is capped at N=2 L<=14 and N=3 L<=12 (got N=" + std::to_string(n) +
                          ", L=" + std::to_string(l) + ")");
  auto fs = curve_coefficients(char_poly(t), n);
  ImExtraction out;
  std::vector<LaurentPoly> shapes;
  for (int i = 1; i <= n; ++i) {
    const auto& fi = fs[i - 1];
    for (int p = 0; p <= fi.degree(); ++p) {
      LaurentPoly c = fi.coeff(p);
      if (c.is_zero()) continue;
      c = clear_denominators(strip_p0(reduce_p0(c, s), s.p0_index()), l);
      if (c.is_constant() || is_central(c, s, l)) {
        out.central.push_back({c, i, p});
        continue;
      }
      int degree = 0;
      if (!c.is_homogeneous(l, degree)) throw std::logic_error("extract_im: non-homogeneous coefficient");
      LaurentPoly sh = shape(c);
      if (std::find(shapes.begin(), shapes.end(), sh) != shapes.end()) continue;
      shapes.push_back(sh);
      IntegralOfMotion h;
      h.raw_sign = c.terms().front().coeff > 0 ? 1 : -1;
      h.value = h.raw_sign > 0 ? c : -c;
      h.degree = degree;
      h.f_index = i;
      h.z_power = p;
      out.im.push_back(std::move(h));
    }
  }
  std::stable_sort(out.im.begin(), out.im.end(),
                   [](const IntegralOfMotion& a, const IntegralOfMotion& b) { return a.degree < b.degree; });
  return out;
}

namespace {

std::vector<Complex> gradient(const Dual& x, int count) {
  std::vector<Complex> g(count);
  for (int i = 0; i < count; ++i) g[i] = x.d(i);
  return g;
}

}  // namespace

int numeric_im_count(int n, int l, std::uint64_t seed) {
  auto v0 = random_positive_state(l, seed);
  std::vector<Dual> v;
  for (int i = 0; i < l; ++i) v.push_back(Dual::variable(v0[i], i, l));
  auto f = char_poly(lv_monodromy_core<Dual>(n, v));
  std::vector<std::vector<Complex>> rows, center_rows;
  for (const auto& [key, c] : f.terms())
    if (key.second < n) rows.push_back(gradient(c, l));
  for (const auto& g : center_spec(n, l).generators) {
    Dual p(1.0);
    for (const auto& t : g.value.terms())
      for (int i = 0; i < l; ++i)
        for (int k = 0; k < t.mono.e[i]; ++k) p = p * v[i];
    center_rows.push_back(gradient(p, l));
  }
  rows.insert(rows.end(), center_rows.begin(), center_rows.end());
  return numeric_rank(rows, 1e-8) - numeric_rank(center_rows, 1e-8);
}

int lv_genus(int n, int l, std::uint64_t seed) {
  validate_lv(n, l);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(4, 12);
  std::vector<GaussRational> v;
  for (int i = 0; i < l; ++i) v.push_back(GaussRational(Rational(num(rng), 8)));
  return newton_genus(char_poly(lv_monodromy_core<GaussRational>(n, v)));
}

// ---------------------------------------------------------------------------

LaurentPoly pq_v(int n, int l, int index) {
  Monomial m;
  auto wrap = [l](int j) { return ((j - 1) % l + l) % l; };
  for (int j = index; j <= index + n - 1; ++j) m.e[wrap(j)] -= 1;
  m.e[l + wrap(index)] -= 1;
  m.e[l + wrap(index + n - 1)] += 1;
  return LaurentPoly(m, Rational(1));
}

PqReport pq_realization_check(int n, int l) {
  validate_lv(n, l);
  auto pq = pq_structure(l);
  auto lv = lv_structure(n, l);
  PqReport rep;
  std::vector<LaurentPoly> v;
  for (int a = 1; a <= l; ++a) v.push_back(pq_v(n, l, a));
  for (int a = 0; a < l; ++a)
    for (int b = 0; b < l; ++b) {
      ++rep.pairs;
      LaurentPoly expect = (v[a] * v[b]).scaled(Rational(lv.coefficient(a, b)));
      if (!(bracket(v[a], v[b], pq) == expect)) rep.mismatches.emplace_back(a + 1, b + 1);
    }
  return rep;
}

// ---------------------------------------------------------------------------

std::vector<double> LVModel::flow_field(int i, std::span<const double> v) const {
  if (i < 1 || i > im.n_H())
    throw std::out_of_range("flow_field: flow index " + std::to_string(i) + " outside 1.." + std::to_string(im.n_H()));
  std::vector<double> out(L);
  for (int n = 0; n < L; ++n) out[n] = flow_plans[i - 1][n](v);
  return out;
}

std::vector<double> LVModel::im_values(std::span<const double> v) const {
  std::vector<double> out;
  for (const auto& p : im_plans) out.push_back(p(v));
  return out;
}

std::vector<double> LVModel::center_values(std::span<const double> v) const {
  std::vector<double> out;
  for (const auto& p : center_plans) out.push_back(p(v));
  return out;
}

LVModel make_lv_model(int n, int l) {
  validate_lv(n, l);
  LVModel m;
  m.N = n;
  m.L = l;
  m.s = lv_structure(n, l);
  m.cls = lax_product_class(n, l);
  m.T = build_t_lv(n, l, m.s);
  m.im = extract_im(n, l, m.s, m.T);
  m.center = center_spec(n, l);
  for (const auto& h : m.im.im) {
    std::vector<EvalPlan> plans;
    for (int k = 0; k < l; ++k) plans.emplace_back(bracket(LaurentPoly::generator(k), h.value, m.s));
    m.flow_plans.push_back(std::move(plans));
    m.im_plans.emplace_back(h.value);
  }
  for (const auto& g : m.center.generators) m.center_plans.emplace_back(g.value);
  return m;
}

std::vector<double> bogoyavlensky_rhs(int n, std::span<const double> v) {
  const int l = static_cast<int>(v.size());
  std::vector<double> out(l, 0.0);
  for (int a = 0; a < l; ++a) {
    double sum = 0;
    for (int k = 1; k <= n - 1; ++k) sum += v[(a + k) % l] - v[((a - k) % l + l) % l];
    out[a] = 2 * v[a] * sum;
  }
  return out;
}

std::vector<double> random_positive_state(int l, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  std::vector<double> v(l);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace sovlat
