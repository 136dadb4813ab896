#include "sovlat/bracket.hpp"

#include <stdexcept>
#include <unordered_map>

namespace sovlat {

BracketStructure::BracketStructure(std::vector<std::string> names, std::vector<int> c)
    : names_(std::move(names)), c_(std::move(c)), degree_count_(static_cast<int>(names_.size())) {
  const int m = size();
  if (m > kMaxGenerators) throw std::invalid_argument("too many generators");
  if (c_.size() != std::size_t(m) * m) throw std::invalid_argument("bracket matrix has wrong size");
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (c_[a * m + b] != -c_[b * m + a])
        throw std::invalid_argument("bracket matrix is not antisymmetric");
}

std::optional<int> BracketStructure::index_of(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

void BracketStructure::set_p0(int index, int root, int degree_generators) {
  p0_index_ = index;
  p0_root_ = root;
  degree_count_ = degree_generators;
}

BracketStructure lv_structure(int n, int l) {
  if (n < 2) throw std::invalid_argument("lv_structure: N must be at least 2");
  if (l < 2 * n - 1) throw std::invalid_argument("lv_structure: L must be at least 2N-1");
  if (l + 1 > kMaxGenerators) throw std::invalid_argument("lv_structure: L too large");
  std::vector<std::string> names;
  for (int i = 1; i <= l; ++i) names.push_back("V" + std::to_string(i));
  names.push_back("P0");
  const int m = l + 1;
  std::vector<int> c(std::size_t(m) * m, 0);
  for (int a = 0; a < l; ++a)
    for (int k = 1; k <= n - 1; ++k) {
      c[a * m + (a + k) % l] += 2;
      c[a * m + ((a - k) % l + l) % l] -= 2;
    }
  BracketStructure s(std::move(names), std::move(c));
  s.set_p0(l, n, l);
  return s;
}

BracketStructure pq_structure(int l) {
  if (2 * l > kMaxGenerators) throw std::invalid_argument("pq_structure: L too large");
  std::vector<std::string> names;
  for (int i = 1; i <= l; ++i) names.push_back("p" + std::to_string(i));
  for (int i = 1; i <= l; ++i) names.push_back("q" + std::to_string(i));
  const int m = 2 * l;
  std::vector<int> c(std::size_t(m) * m, 0);
  for (int i = 0; i < l; ++i) {
    c[i * m + l + i] = 1;
    c[(l + i) * m + i] = -1;
  }
  return BracketStructure(std::move(names), std::move(c));
}

BracketStructure lax_structure(int n, int sites) {
  const int per = n + 1;
  const int m = per * sites;
  if (m > kMaxGenerators) throw std::invalid_argument("lax_structure: too many generators");
  std::vector<std::string> names;
  for (int s = 1; s <= sites; ++s)
    for (int k = 0; k <= n; ++k) names.push_back("l" + std::to_string(s) + "_" + std::to_string(k));
  std::vector<int> c(std::size_t(m) * m, 0);
  for (int s = 0; s < sites; ++s) {
    int l0 = s * per, l1 = s * per + 1, ln = s * per + n;
    c[l0 * m + l1] -= 1;
    c[l1 * m + l0] += 1;
    c[l0 * m + ln] += 1;
    c[ln * m + l0] -= 1;
  }
  return BracketStructure(std::move(names), std::move(c));
}

LaurentPoly bracket(const LaurentPoly& f, const LaurentPoly& g, const BracketStructure& s) {
  if (f.is_zero() || g.is_zero()) return {};
  const int m = s.size();
  struct Sparse {
    std::vector<std::pair<int, int>> nz;
  };
  std::vector<Sparse> gs(g.size());
  for (std::size_t j = 0; j < g.size(); ++j)
    for (int q = 0; q < m; ++q)
      if (int b = g.terms()[j].mono.e[q]) gs[j].nz.push_back({q, b});

  std::vector<LaurentPoly::Term> out;
  std::vector<long> u(m);
  for (const auto& tf : f.terms()) {
    std::fill(u.begin(), u.end(), 0);
    bool any = false;
    for (int p = 0; p < m; ++p) {
      int a = tf.mono.e[p];
      if (!a) continue;
      for (int q = 0; q < m; ++q)
        if (int cpq = s.coefficient(p, q)) {
          u[q] += long(a) * cpq;
          any = true;
        }
    }
    if (!any) continue;
    for (std::size_t j = 0; j < g.size(); ++j) {
      long w = 0;
      for (auto [q, b] : gs[j].nz) w += u[q] * b;
      if (w == 0) continue;
      const auto& tg = g.terms()[j];
      out.push_back({tf.mono * tg.mono, Rational(tf.coeff * tg.coeff * w)});
    }
  }
  return LaurentPoly::from_terms(std::move(out));
}

LaurentPoly reduce_p0(const LaurentPoly& f, const BracketStructure& s) {
  const int p = s.p0_index();
  if (p < 0) return f;
  const int root = s.p0_root();
  std::vector<LaurentPoly::Term> out;
  for (auto t : f.terms()) {
    int e = t.mono.e[p];
    int q = e >= 0 ? e / root : -((-e + root - 1) / root);
    if (q != 0) {
      t.mono.e[p] = static_cast<std::int8_t>(e - q * root);
      for (int i = 0; i < s.degree_generators(); ++i)
        t.mono.e[i] = static_cast<std::int8_t>(t.mono.e[i] - q);
    }
    out.push_back(std::move(t));
  }
  return LaurentPoly::from_terms(std::move(out));
}

bool RttResidual::is_zero() const {
  for (const auto& e : entries)
    if (!e.is_zero()) return false;
  return true;
}

std::size_t RttResidual::nonzero_entries() const {
  std::size_t c = 0;
  for (const auto& e : entries) c += e.is_zero() ? 0 : 1;
  return c;
}

std::size_t RttResidual::total_terms() const {
  std::size_t c = 0;
  for (const auto& e : entries)
    for (const auto& [k, v] : e.terms()) c += v.size();
  return c;
}

namespace {

using Bi = BiPoly<LaurentPoly>;

// Coefficient alpha*z + beta*z' attached to one entry of (z - z') r(z - z').
struct RhoEntry {
  int row, col;
  int alpha, beta;
};

std::vector<RhoEntry> rho_entries(int n) {
  std::vector<RhoEntry> out;
  auto idx = [n](int a, int b) { return a * n + b; };
  for (int k = 0; k < n; ++k) out.push_back({idx(k, k), idx(k, k), 1, 1});
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      out.push_back({idx(k, j), idx(j, k), 2, 0});  // 2z E_kj (x) E_jk
      out.push_back({idx(j, k), idx(k, j), 0, 2});  // 2z' E_jk (x) E_kj
    }
  return out;
}

Bi outer(const UniPoly<LaurentPoly>& a, const UniPoly<LaurentPoly>& b) {
  Bi out;
  for (int i = 0; i <= a.degree(); ++i) {
    if (a.coeffs()[i].is_zero()) continue;
    for (int j = 0; j <= b.degree(); ++j)
      if (!b.coeffs()[j].is_zero()) out.add_term(i, j, a.coeffs()[i] * b.coeffs()[j]);
  }
  return out;
}

Bi linear(int alpha, int beta) {
  Bi out;
  if (alpha) out.add_term(1, 0, LaurentPoly(alpha));
  if (beta) out.add_term(0, 1, LaurentPoly(beta));
  return out;
}

}  // namespace

RttResidual matrix_bracket_residual(const PolyMatrix<LaurentPoly>& t, const BracketStructure& s) {
  const int n = t.size();
  const int n2 = n * n;
  RttResidual res;
  res.n = n;
  res.entries.assign(std::size_t(n2) * n2, Bi());

  // Cache of T_ab(z) T_cd(z') products keyed by (a*n+b, c*n+d).
  std::unordered_map<int, Bi> cache;
  auto prod = [&](int ab, int cd) -> const Bi& {
    int key = ab * n2 + cd;
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    return cache.emplace(key, outer(t(ab / n, ab % n), t(cd / n, cd % n))).first->second;
  };

  const auto rho = rho_entries(n);
  const Bi zmz = linear(1, -1);

  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          const int row = i * n + k, col = j * n + l;
          Bi br;
          const auto& a = t(i, j);
          const auto& b = t(k, l);
          for (int p = 0; p <= a.degree(); ++p)
            for (int q = 0; q <= b.degree(); ++q) {
              LaurentPoly v = bracket(a.coeffs()[p], b.coeffs()[q], s);
              if (!v.is_zero()) br.add_term(p, q, v);
            }
          Bi total = zmz * br;
          for (const auto& e : rho) {
            if (e.row == row) {  // (rho T(x)T')[(i,k),(j,l)] picks column (p,q) = e.col
              int pp = e.col / n, qq = e.col % n;
              total -= linear(e.alpha, e.beta) * prod(pp * n + j, qq * n + l);
            }
            if (e.col == col) {  // (T(x)T' rho)[(i,k),(j,l)] picks row (p,q) = e.row
              int pp = e.row / n, qq = e.row % n;
              total += prod(i * n + pp, k * n + qq) * linear(e.alpha, e.beta);
            }
          }
          res.entries[std::size_t(row) * n2 + col] = std::move(total);
        }
  return res;
}

}  // namespace sovlat
