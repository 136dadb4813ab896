#include "sovlat/monodromy.hpp"

#include <map>
#include <sstream>
#include <tuple>
#include <stdexcept>

namespace sovlat {

LatticeIntegers lattice_integers(int n, int l) {
  LatticeIntegers li;
  li.L = l;
  li.m = l / (n * (n - 1));
  li.k = l % (n * (n - 1));
  li.m1 = l / (n - 1);
  li.k1 = l % (n - 1);
  li.m2 = l / n;
  li.k2 = l % n;
  return li;
}

std::string MonodromyClass::str() const {
  std::ostringstream os;
  os << "T_{" << m << ";" << n1 << "," << n2 << "} (N=" << N << ")";
  return os.str();
}

void validate_class(const MonodromyClass& c) {
  if (c.N < 2) throw std::invalid_argument("class: N must be at least 2");
  if (c.m < 1) throw std::invalid_argument("class: m must be at least 1");
  if (c.n1 < 1 || c.n1 > c.N - 1) throw std::invalid_argument("class: n1 out of range");
  if (c.n2 < 1 || c.n2 > c.N) throw std::invalid_argument("class: n2 out of range");
}

bool class_is_admissible(const MonodromyClass& c) {
  try {
    validate_class(c);
  } catch (const std::invalid_argument&) {
    return false;
  }
  static std::map<std::tuple<int, int, int, int>, bool> cache;
  auto key = std::make_tuple(c.N, c.m, c.n1, c.n2);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  std::mt19937_64 rng(0x5eed);
  auto f = char_poly(build_T<GaussRational>(c, random_exact_coefficients(c, rng)));
  auto fs = curve_coefficients(f, c.N);
  const auto& g = fs[c.N - 2];
  bool ok = g.degree() == (c.N - 1) * c.m - c.n1 + 1 && g.order() == c.n2 - 1;
  cache[key] = ok;
  return ok;
}

int MuPattern::count() const {
  int c = 0;
  for (auto f : free) c += f;
  return c;
}

MuPattern MuPattern::operator&(const MuPattern& o) const {
  MuPattern out = *this;
  for (std::size_t i = 0; i < free.size(); ++i) out.free[i] = free[i] && o.free[i];
  return out;
}

std::string MuPattern::str() const {
  std::string s;
  for (int r = 0; r < N; ++r) {
    if (r) s += '/';
    for (int c = 0; c < N; ++c) s += is_free(r, c) ? '*' : '0';
  }
  return s;
}

MuPattern mu_pattern(int n, MuKind kind, int index) {
  if (n < 2) throw std::invalid_argument("mu_pattern: N must be at least 2");
  switch (kind) {
    case MuKind::Minus:
      if (index < 1 || index > n - 1) throw std::invalid_argument("mu_pattern: minus index out of range");
      break;
    case MuKind::Plus:
      if (index < 1 || index > n) throw std::invalid_argument("mu_pattern: plus index out of range");
      break;
    case MuKind::MinusZero:
    case MuKind::PlusZero:
      if (index < 0 || index > n - 3) throw std::invalid_argument("mu_pattern: index out of range");
      break;
    case MuKind::Full:
      break;
  }
  MuPattern p{n, std::vector<std::uint8_t>(std::size_t(n) * n, 0)};
  for (int r = 1; r <= n; ++r)
    for (int c = 1; c <= n; ++c) {
      bool f = false;
      switch (kind) {
        case MuKind::Minus: f = r >= index + 1 && c <= r - index + 1; break;
        case MuKind::Plus: f = c >= r + index - 1; break;
        case MuKind::MinusZero: f = c <= r + index + 1; break;
        case MuKind::PlusZero: f = c >= r - index - 1; break;
        case MuKind::Full: f = true; break;
      }
      p.free[(r - 1) * n + (c - 1)] = f;
    }
  return p;
}

std::vector<MuPattern> block_patterns(const MonodromyClass& c) {
  validate_class(c);
  const int n = c.N;
  const MuPattern full = mu_pattern(n, MuKind::Full);
  const MuPattern a = mu_pattern(n, MuKind::Minus, c.n1);
  const int ib = n - 1 - c.n1;
  const MuPattern b = ib <= n - 3 ? mu_pattern(n, MuKind::MinusZero, ib) : full;
  const int ic = n - c.n2;
  const MuPattern cc = ic <= n - 3 ? mu_pattern(n, MuKind::PlusZero, ic) : full;
  const MuPattern d = mu_pattern(n, MuKind::Plus, c.n2);

  std::vector<MuPattern> out(c.m + 1, full);
  if (c.m >= 3) {
    out[c.m] = a;
    out[c.m - 1] = b;
    out[1] = cc;
    out[0] = d;
  } else if (c.m == 2) {
    out[2] = a;
    out[1] = b & cc;
    out[0] = d;
  } else {
    out[1] = a & cc;
    out[0] = b & d;
  }
  return out;
}

int free_parameter_count(const MonodromyClass& c) {
  int total = 0;
  for (const auto& p : block_patterns(c)) total += p.count();
  return total;
}

namespace {

Rational small_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

}  // namespace

std::vector<GaussRational> random_exact_coefficients(const MonodromyClass& c, std::mt19937_64& rng) {
  std::vector<GaussRational> out;
  const int count = free_parameter_count(c);
  while (static_cast<int>(out.size()) < count) {
    GaussRational g(small_rational(rng), small_rational(rng));
    if (!g.is_zero()) out.push_back(g);
  }
  return out;
}

std::vector<Complex> random_complex_coefficients(const MonodromyClass& c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mod(0.5, 2.0), ang(-3.14159, 3.14159);
  std::vector<Complex> out;
  int count = free_parameter_count(c);
  for (int i = 0; i < count; ++i) out.push_back(std::polar(mod(rng), ang(rng)));
  return out;
}

template <Ring R>
MonodromyClass classify_F(const BiPoly<R>& f, int n) {
  if (f.degree_y() != n) throw std::domain_error("not in the T-family");
  auto fs = curve_coefficients(f, n);
  int m = 0;
  for (int i = 1; i <= n; ++i) {
    int d = fs[i - 1].degree();
    if (d < 0) continue;
    m = std::max(m, (d + i - 1) / i);
  }
  const auto& fnm1 = fs[n - 2];
  if (m < 1 || fnm1.is_zero()) throw std::domain_error("not in the T-family");
  MonodromyClass c{n, m, (n - 1) * m + 1 - fnm1.degree(), fnm1.order() + 1, std::nullopt};
  if (c.n1 < 1 || c.n1 > n - 1 || c.n2 < 1 || c.n2 > n) throw std::domain_error("not in the T-family");
  return c;
}

template MonodromyClass classify_F<GaussRational>(const BiPoly<GaussRational>&, int);
template MonodromyClass classify_F<Complex>(const BiPoly<Complex>&, int);
template MonodromyClass classify_F<LaurentPoly>(const BiPoly<LaurentPoly>&, int);

PolyMatrix<LaurentPoly> local_lax(int n, int site, const BracketStructure& s) {
  const int base = (site - 1) * (n + 1);
  if (site < 1 || base + n >= s.size()) throw std::invalid_argument("local_lax: site not in structure");
  std::vector<LaurentPoly> l;
  for (int k = 0; k <= n; ++k) l.push_back(LaurentPoly::generator(base + k));
  return lax_matrix<LaurentPoly>(n, l);
}

PolyMatrix<LaurentPoly> symbolic_lax_product(int n, int l, const BracketStructure& s) {
  std::vector<PolyMatrix<LaurentPoly>> factors;
  for (int site = 1; site <= l; ++site) factors.push_back(local_lax(n, site, s));
  return ordered_product(factors);
}

MonodromyClass lax_product_class_formula(int n, int l) {
  if (n < 2) throw std::invalid_argument("lax_product_class: N must be at least 2");
  if (l < 1) throw std::invalid_argument("lax_product_class: L must be positive");
  LatticeIntegers li = lattice_integers(n, l);
  int k1 = li.k1, k2 = li.k2;
  if (k1 == 0 && k2 != 0) k1 = n - 1;
  MonodromyClass c;
  c.N = n;
  c.lattice = li;
  if (k1 == 0 && k2 == 0) {
    c.m = li.m;
    c.n1 = 1;
    c.n2 = 1;
  } else if (k1 - k2 >= 0 && k1 - k2 <= n - 2) {
    c.m = li.m + 1;
    c.n1 = n - k1;
    c.n2 = k2 + 1;
  } else if (k1 - k2 <= -1) {
    c.m = li.m + 2;
    c.n1 = n - k1;
    c.n2 = k2 + 1;
  } else {
    throw std::logic_error("lax_product_class: residues outside every branch");
  }
  return c;
}

MonodromyClass lax_product_class_bruteforce(int n, int l, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> val(1, 7);
  std::vector<PolyMatrix<GaussRational>> factors;
  for (int site = 0; site < l; ++site) {
    std::vector<GaussRational> v;
    for (int k = 0; k <= n; ++k) v.push_back(GaussRational(val(rng)));
    factors.push_back(lax_matrix<GaussRational>(n, v));
  }
  PolyMatrix<GaussRational> t = ordered_product(factors);
  const int m2 = l / n;
  if (t.order() < m2) throw std::runtime_error("lax product is not divisible by z^m2");
  t = t.shifted(-m2);

  std::vector<MuPattern> observed;
  for (int p = 0; p <= t.degree(); ++p) {
    MuPattern mp{n, std::vector<std::uint8_t>(std::size_t(n) * n, 0)};
    auto cm = t.coefficient(p);
    for (int i = 0; i < n * n; ++i) mp.free[i] = !cm.entries()[i].is_zero();
    observed.push_back(mp);
  }
  std::vector<MonodromyClass> matches;
  const int m = t.degree();
  for (int n1 = 1; n1 <= n - 1; ++n1)
    for (int n2 = 1; n2 <= n; ++n2) {
      MonodromyClass c{n, m, n1, n2, std::nullopt};
      if (class_is_admissible(c) && block_patterns(c) == observed) matches.push_back(c);
    }
  if (matches.size() != 1) {
    std::ostringstream os;
    os << "lax product pattern for N=" << n << ", L=" << l << " matches " << matches.size()
       << " classes";
    throw std::runtime_error(os.str());
  }
  matches[0].lattice = lattice_integers(n, l);
  return matches[0];
}

MonodromyClass lax_product_class(int n, int l) {
  MonodromyClass formula = lax_product_class_formula(n, l);
  MonodromyClass brute = lax_product_class_bruteforce(n, l);
  if (!(formula == brute)) {
    std::ostringstream os;
    os << "lax_product_class: formula gives " << formula.str() << " but the explicit product gives "
       << brute.str();
    throw std::runtime_error(os.str());
  }
  return brute;
}

CommutationReport verify_commutation(const PolyMatrix<LaurentPoly>& t, const BracketStructure& s) {
  CommutationReport rep;
  const int n = t.size();
  UniPoly<LaurentPoly> det = t.det();
  std::vector<LaurentPoly> entries;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (const auto& c : t(i, j).coeffs())
        if (!c.is_zero()) entries.push_back(c);
  for (const auto& d : det.coeffs()) {
    if (d.is_zero()) continue;
    for (const auto& e : entries) {
      ++rep.center_pairs;
      if (!bracket(e, d, s).is_zero()) ++rep.center_nonzero;
    }
  }
  BiPoly<LaurentPoly> f = char_poly(t);
  std::vector<LaurentPoly> coeffs;
  for (const auto& [k, v] : f.terms())
    if (!v.is_constant()) coeffs.push_back(v);
  for (std::size_t a = 0; a < coeffs.size(); ++a)
    for (std::size_t b = a + 1; b < coeffs.size(); ++b) {
      ++rep.involution_pairs;
      if (!bracket(coeffs[a], coeffs[b], s).is_zero()) ++rep.involution_nonzero;
    }
  return rep;
}

}  // namespace sovlat
