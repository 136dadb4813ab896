#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sovlat/scalar.hpp"

namespace sovlat {

namespace detail {
template <class R>
bool zero(const R& x) {
  return is_zero(x);
}
}  // namespace detail

/// Dense univariate polynomial with coefficients stored in ascending degree.
/// The coefficient vector never carries trailing zeros, so the zero
/// polynomial has an empty vector and degree -1.
template <Ring R>
class UniPoly {
 public:
  using coeff_type = R;

  UniPoly() = default;
  UniPoly(int c) { push_const(R(c)); }  // NOLINT(google-explicit-constructor)
  explicit UniPoly(R c) { push_const(std::move(c)); }
  explicit UniPoly(std::vector<R> coeffs) : c_(std::move(coeffs)) { trim(); }

  static UniPoly monomial(R c, int degree) {
    UniPoly p;
    if (detail::zero(c)) return p;
    p.c_.assign(degree + 1, R(0));
    p.c_[degree] = std::move(c);
    return p;
  }
  static UniPoly x() { return monomial(R(1), 1); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<R>& coeffs() const { return c_; }
  R coeff(int i) const { return (i >= 0 && i <= degree()) ? c_[i] : R(0); }
  const R& leading() const { return c_.back(); }

  /// Lowest power carrying a nonzero coefficient, -1 for the zero polynomial.
  int order() const {
    for (int i = 0; i <= degree(); ++i)
      if (!detail::zero(c_[i])) return i;
    return -1;
  }

  /// Multiplies by x^k. Negative k requires the low coefficients to vanish.
  UniPoly shifted(int k) const {
    if (is_zero() || k == 0) return *this;
    if (k > 0) {
      std::vector<R> out(k, R(0));
      out.insert(out.end(), c_.begin(), c_.end());
      return UniPoly(std::move(out));
    }
    if (order() < -k) throw std::domain_error("UniPoly::shifted: not divisible by x^k");
    return UniPoly(std::vector<R>(c_.begin() - k, c_.end()));
  }

  UniPoly derivative() const {
    std::vector<R> out;
    for (int i = 1; i <= degree(); ++i) out.push_back(R(i) * c_[i]);
    return UniPoly(std::move(out));
  }

  template <class S>
  S eval(const S& x) const {
    S acc(0);
    for (int i = degree(); i >= 0; --i) acc = acc * x + S(c_[i]);
    return acc;
  }

  template <class F>
  auto map(F f) const {
    using S = decltype(f(std::declval<const R&>()));
    std::vector<S> out;
    out.reserve(c_.size());
    for (const R& c : c_) out.push_back(f(c));
    return UniPoly<S>(std::move(out));
  }

  UniPoly& operator+=(const UniPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), R(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = c_[i] + o.c_[i];
    trim();
    return *this;
  }
  UniPoly& operator-=(const UniPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), R(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = c_[i] - o.c_[i];
    trim();
    return *this;
  }
  friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
  friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
  friend UniPoly operator-(const UniPoly& a) {
    std::vector<R> out;
    out.reserve(a.c_.size());
    for (const R& c : a.c_) out.push_back(-c);
    return UniPoly(std::move(out));
  }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<R> out(a.c_.size() + b.c_.size() - 1, R(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (detail::zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) {
        if (detail::zero(b.c_[j])) continue;
        out[i + j] = out[i + j] + a.c_[i] * b.c_[j];
      }
    }
    return UniPoly(std::move(out));
  }
  friend UniPoly operator*(const R& s, const UniPoly& a) {
    if (detail::zero(s)) return {};
    std::vector<R> out;
    out.reserve(a.c_.size());
    for (const R& c : a.c_) out.push_back(s * c);
    return UniPoly(std::move(out));
  }
  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }

 private:
  void push_const(R c) {
    if (!detail::zero(c)) c_.push_back(std::move(c));
  }
  void trim() {
    while (!c_.empty() && detail::zero(c_.back())) c_.pop_back();
  }

  std::vector<R> c_;
};

template <class R>
bool is_zero(const UniPoly<R>& p) {
  return p.is_zero();
}

template <class R>
struct scalar_traits<UniPoly<R>> {
  static constexpr bool exact = scalar_traits<R>::exact;
  static constexpr bool field = false;
};

/// Quotient and remainder of polynomial division over a field.
template <Field R>
std::pair<UniPoly<R>, UniPoly<R>> divmod(const UniPoly<R>& a, const UniPoly<R>& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<R> rem = a.coeffs();
  int db = b.degree();
  int dq = a.degree() - db;
  if (dq < 0) return {UniPoly<R>(), a};
  std::vector<R> q(dq + 1, R(0));
  R lead = b.leading();
  for (int k = dq; k >= 0; --k) {
    R t = rem[k + db] / lead;
    if (is_zero(t)) continue;
    q[k] = t;
    for (int j = 0; j <= db; ++j) rem[k + j] = rem[k + j] - t * b.coeffs()[j];
  }
  rem.resize(db);
  return {UniPoly<R>(std::move(q)), UniPoly<R>(std::move(rem))};
}

/// Division that must leave no remainder.
template <ExactField R>
UniPoly<R> exact_div(const UniPoly<R>& a, const UniPoly<R>& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) throw std::domain_error("exact_div: nonzero remainder");
  return q;
}

// Exact quotient for Bareiss elimination: coefficient fields divide directly,
// polynomial rings over exact fields use exact_div.
template <class R>
R bareiss_quotient(const R& a, const R& b) {
  if constexpr (ExactField<R>) {
    return a / b;
  } else {
    return exact_div(a, b);
  }
}

template <class R>
inline constexpr bool bareiss_capable = ExactField<R>;
template <class R>
inline constexpr bool bareiss_capable<UniPoly<R>> = ExactField<R>;

/// Division-free determinant by Laplace expansion memoized over column
/// subsets. Works over any commutative ring; costs O(2^n n) ring operations.
template <Ring R>
R det_cofactor(const std::vector<R>& a, int n) {
  if (n == 0) return R(1);
  if (n > 20) throw std::invalid_argument("det_cofactor: matrix too large");
  const std::uint32_t full = (1u << n) - 1;
  std::vector<R> d(std::size_t(1) << n, R(0));
  std::vector<bool> known(std::size_t(1) << n, false);
  d[0] = R(1);
  known[0] = true;
  std::vector<std::vector<std::uint32_t>> by_size(n + 1);
  for (std::uint32_t s = 1; s <= full; ++s) by_size[__builtin_popcount(s)].push_back(s);
  for (int k = 1; k <= n; ++k) {
    const int row = k - 1;
    for (std::uint32_t s : by_size[k]) {
      R acc(0);
      for (int j = 0; j < n; ++j) {
        if (!(s & (1u << j))) continue;
        const R& x = a[row * n + j];
        std::uint32_t rest = s & ~(1u << j);
        if (is_zero(x) || is_zero(d[rest])) continue;
        int pos = __builtin_popcount(s & ((1u << j) - 1));
        R term = x * d[rest];
        if ((row + pos) % 2 == 0)
          acc = acc + term;
        else
          acc = acc - term;
      }
      d[s] = std::move(acc);
    }
  }
  return d[full];
}

/// Fraction-free Gaussian elimination. Requires exact division by the
/// previous pivot, which holds for exact fields and polynomials over them.
template <Ring R>
  requires bareiss_capable<R>
R det_bareiss(std::vector<R> a, int n) {
  if (n == 0) return R(1);
  R prev(1);
  bool negate = false;
  for (int k = 0; k < n - 1; ++k) {
    if (is_zero(a[k * n + k])) {
      int swap_row = -1;
      for (int i = k + 1; i < n; ++i)
        if (!is_zero(a[i * n + k])) {
          swap_row = i;
          break;
        }
      if (swap_row < 0) return R(0);
      for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[swap_row * n + j]);
      negate = !negate;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        R num = a[k * n + k] * a[i * n + j] - a[i * n + k] * a[k * n + j];
        a[i * n + j] = bareiss_quotient(num, prev);
      }
      a[i * n + k] = R(0);
    }
    prev = a[k * n + k];
  }
  R result = a[(n - 1) * n + (n - 1)];
  return negate ? R(-result) : result;
}

/// Determinant of a row-major n x n matrix. Small matrices and rings without
/// exact division use cofactor expansion; larger exact matrices use Bareiss.
template <Ring R>
R determinant(const std::vector<R>& a, int n) {
  if constexpr (bareiss_capable<R>) {
    if (n > 4) return det_bareiss(a, n);
  }
  return det_cofactor(a, n);
}

/// Sparse bivariate polynomial sum c_{ab} x^a y^b with nonnegative exponents.
template <Ring R>
class BiPoly {
 public:
  using Key = std::pair<int, int>;

  BiPoly() = default;

  static BiPoly monomial(R c, int a, int b) {
    BiPoly p;
    p.add_term(a, b, std::move(c));
    return p;
  }

  void add_term(int a, int b, const R& c) {
    if (detail::zero(c)) return;
    auto it = t_.find({a, b});
    if (it == t_.end()) {
      t_.emplace(Key{a, b}, c);
      return;
    }
    it->second = it->second + c;
    if (detail::zero(it->second)) t_.erase(it);
  }

  const std::map<Key, R>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  std::size_t size() const { return t_.size(); }

  R coeff(int a, int b) const {
    auto it = t_.find({a, b});
    return it == t_.end() ? R(0) : it->second;
  }

  int degree_x() const {
    int d = -1;
    for (const auto& [k, v] : t_) d = std::max(d, k.first);
    return d;
  }
  int degree_y() const {
    int d = -1;
    for (const auto& [k, v] : t_) d = std::max(d, k.second);
    return d;
  }

  /// Coefficient of y^b as a polynomial in x.
  UniPoly<R> coeff_y(int b) const {
    std::vector<R> out;
    for (const auto& [k, v] : t_) {
      if (k.second != b) continue;
      if (static_cast<int>(out.size()) <= k.first) out.resize(k.first + 1, R(0));
      out[k.first] = v;
    }
    return UniPoly<R>(std::move(out));
  }

  /// Builds sum_b inner_b(x) y^b from polynomial coefficients in y.
  static BiPoly from_nested(const UniPoly<UniPoly<R>>& p) {
    BiPoly out;
    for (int b = 0; b <= p.degree(); ++b) {
      const auto& inner = p.coeffs()[b];
      for (int a = 0; a <= inner.degree(); ++a) out.add_term(a, b, inner.coeffs()[a]);
    }
    return out;
  }

  template <class S>
  S eval(const S& x, const S& y) const {
    S acc(0);
    for (const auto& [k, v] : t_) acc = acc + S(v) * ipow(x, k.first) * ipow(y, k.second);
    return acc;
  }

  Complex eval_complex(Complex x, Complex y) const {
    Complex acc(0);
    for (const auto& [k, v] : t_) acc += to_complex(v) * ipow(x, k.first) * ipow(y, k.second);
    return acc;
  }

  /// Sum of the absolute values of the individual terms at (x, y).
  double term_scale(Complex x, Complex y) const {
    double acc = 0;
    for (const auto& [k, v] : t_)
      acc += std::abs(to_complex(v) * ipow(x, k.first) * ipow(y, k.second));
    return acc;
  }

  /// Partial derivative with respect to y.
  BiPoly diff_y() const {
    BiPoly out;
    for (const auto& [k, v] : t_)
      if (k.second > 0) out.add_term(k.first, k.second - 1, R(k.second) * v);
    return out;
  }

  template <class F>
  auto map(F f) const {
    using S = decltype(f(std::declval<const R&>()));
    BiPoly<S> out;
    for (const auto& [k, v] : t_) out.add_term(k.first, k.second, f(v));
    return out;
  }

  BiPoly& operator+=(const BiPoly& o) {
    for (const auto& [k, v] : o.t_) add_term(k.first, k.second, v);
    return *this;
  }
  BiPoly& operator-=(const BiPoly& o) {
    for (const auto& [k, v] : o.t_) add_term(k.first, k.second, -v);
    return *this;
  }
  friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
  friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
    BiPoly out;
    for (const auto& [ka, va] : a.t_)
      for (const auto& [kb, vb] : b.t_)
        out.add_term(ka.first + kb.first, ka.second + kb.second, va * vb);
    return out;
  }
  friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.t_ == b.t_; }

 private:
  template <class S>
  static S ipow(S x, int e) {
    S r(1);
    while (e > 0) {
      if (e & 1) r = r * x;
      x = x * x;
      e >>= 1;
    }
    return r;
  }

  std::map<Key, R> t_;
};

/// Square matrix of ring elements, row-major.
template <Ring R>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int n) : n_(n), a_(std::size_t(n) * n, R(0)) {}
  SquareMatrix(int n, std::vector<R> entries) : n_(n), a_(std::move(entries)) {
    if (a_.size() != std::size_t(n) * n) throw std::invalid_argument("SquareMatrix: bad size");
  }
  static SquareMatrix identity(int n) {
    SquareMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = R(1);
    return m;
  }

  int size() const { return n_; }
  R& operator()(int i, int j) { return a_[i * n_ + j]; }
  const R& operator()(int i, int j) const { return a_[i * n_ + j]; }
  const std::vector<R>& entries() const { return a_; }

  R det() const { return determinant(a_, n_); }

  template <class F>
  auto map(F f) const {
    using S = decltype(f(std::declval<const R&>()));
    std::vector<S> out;
    out.reserve(a_.size());
    for (const R& x : a_) out.push_back(f(x));
    return SquareMatrix<S>(n_, std::move(out));
  }

  friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
    SquareMatrix c(a.n_);
    for (int i = 0; i < a.n_; ++i)
      for (int k = 0; k < a.n_; ++k) {
        const R& x = a(i, k);
        if (is_zero(x)) continue;
        for (int j = 0; j < a.n_; ++j)
          if (!is_zero(b(k, j))) c(i, j) = c(i, j) + x * b(k, j);
      }
    return c;
  }
  friend SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b) {
    for (std::size_t i = 0; i < a.a_.size(); ++i) a.a_[i] = a.a_[i] + b.a_[i];
    return a;
  }
  friend SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b) {
    for (std::size_t i = 0; i < a.a_.size(); ++i) a.a_[i] = a.a_[i] - b.a_[i];
    return a;
  }
  friend bool operator==(const SquareMatrix& a, const SquareMatrix& b) {
    return a.n_ == b.n_ && a.a_ == b.a_;
  }

 private:
  int n_ = 0;
  std::vector<R> a_;
};

/// Inverse by Gauss-Jordan elimination over a field. Throws when singular.
template <Field R>
SquareMatrix<R> inverse(const SquareMatrix<R>& m) {
  const int n = m.size();
  SquareMatrix<R> a = m;
  SquareMatrix<R> inv = SquareMatrix<R>::identity(n);
  for (int k = 0; k < n; ++k) {
    int piv = -1;
    if constexpr (scalar_traits<R>::exact) {
      for (int i = k; i < n; ++i)
        if (!is_zero(a(i, k))) {
          piv = i;
          break;
        }
    } else {
      double best = 0;
      for (int i = k; i < n; ++i) {
        double v = std::abs(to_complex(a(i, k)));
        if (v > best) {
          best = v;
          piv = i;
        }
      }
    }
    if (piv < 0) throw std::domain_error("matrix is singular");
    for (int j = 0; j < n; ++j) {
      std::swap(a(k, j), a(piv, j));
      std::swap(inv(k, j), inv(piv, j));
    }
    R p = a(k, k);
    for (int j = 0; j < n; ++j) {
      a(k, j) = a(k, j) / p;
      inv(k, j) = inv(k, j) / p;
    }
    for (int i = 0; i < n; ++i) {
      if (i == k || is_zero(a(i, k))) continue;
      R f = a(i, k);
      for (int j = 0; j < n; ++j) {
        a(i, j) = a(i, j) - f * a(k, j);
        inv(i, j) = inv(i, j) - f * inv(k, j);
      }
    }
  }
  return inv;
}

/// N x N matrix whose entries are polynomials in the spectral parameter z.
template <Ring R>
class PolyMatrix {
 public:
  PolyMatrix() = default;
  explicit PolyMatrix(int n) : m_(n) {}
  explicit PolyMatrix(SquareMatrix<UniPoly<R>> m) : m_(std::move(m)) {}

  static PolyMatrix identity(int n) { return PolyMatrix(SquareMatrix<UniPoly<R>>::identity(n)); }

  /// Builds sum_p coeffs[p] z^p from constant coefficient matrices.
  static PolyMatrix from_coefficients(const std::vector<SquareMatrix<R>>& coeffs) {
    if (coeffs.empty()) throw std::invalid_argument("PolyMatrix: no coefficients");
    int n = coeffs.front().size();
    PolyMatrix out(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        std::vector<R> c;
        for (const auto& cm : coeffs) c.push_back(cm(i, j));
        out(i, j) = UniPoly<R>(std::move(c));
      }
    return out;
  }

  int size() const { return m_.size(); }
  UniPoly<R>& operator()(int i, int j) { return m_(i, j); }
  const UniPoly<R>& operator()(int i, int j) const { return m_(i, j); }
  const SquareMatrix<UniPoly<R>>& grid() const { return m_; }

  int degree() const {
    int d = -1;
    for (const auto& e : m_.entries()) d = std::max(d, e.degree());
    return d;
  }

  /// Lowest power of z present in any entry, -1 for the zero matrix.
  int order() const {
    int o = -1;
    for (const auto& e : m_.entries()) {
      int eo = e.order();
      if (eo >= 0 && (o < 0 || eo < o)) o = eo;
    }
    return o;
  }

  SquareMatrix<R> coefficient(int p) const {
    SquareMatrix<R> out(size());
    for (int i = 0; i < size(); ++i)
      for (int j = 0; j < size(); ++j) out(i, j) = m_(i, j).coeff(p);
    return out;
  }

  PolyMatrix shifted(int k) const {
    return PolyMatrix(m_.map([k](const UniPoly<R>& e) { return e.shifted(k); }));
  }

  template <class F>
  auto map_coeffs(F f) const {
    using S = decltype(f(std::declval<const R&>()));
    return PolyMatrix<S>(m_.map([&f](const UniPoly<R>& e) { return e.map(f); }));
  }

  template <class S>
  SquareMatrix<S> eval(const S& z) const {
    return m_.map([&z](const UniPoly<R>& e) { return e.template eval<S>(z); });
  }

  UniPoly<R> det() const { return determinant(m_.entries(), size()); }

  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
    return PolyMatrix(a.m_ * b.m_);
  }
  friend PolyMatrix operator*(const SquareMatrix<R>& s, const PolyMatrix& a) {
    return PolyMatrix(s.map([](const R& x) { return UniPoly<R>(x); }) * a.m_);
  }
  friend PolyMatrix operator*(const PolyMatrix& a, const SquareMatrix<R>& s) {
    return PolyMatrix(a.m_ * s.map([](const R& x) { return UniPoly<R>(x); }));
  }
  friend bool operator==(const PolyMatrix& a, const PolyMatrix& b) { return a.m_ == b.m_; }

 private:
  SquareMatrix<UniPoly<R>> m_;
};

/// Characteristic polynomial Det(w - T(z)) as a polynomial in (z, w).
template <Ring R>
BiPoly<R> char_poly(const PolyMatrix<R>& t) {
  using P = UniPoly<R>;
  using PP = UniPoly<P>;
  const int n = t.size();
  std::vector<PP> a;
  a.reserve(std::size_t(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      PP e(std::vector<P>{P(-t(i, j))});
      if (i == j) e += PP::monomial(P(R(1)), 1);
      a.push_back(std::move(e));
    }
  return BiPoly<R>::from_nested(det_cofactor(a, n));
}

/// Coefficients f_1..f_N of F = w^N - f_1 w^{N-1} + f_2 w^{N-2} - ... so that
/// f_i is the sum of principal i x i minors. Entry i-1 of the result is f_i.
template <Ring R>
std::vector<UniPoly<R>> curve_coefficients(const BiPoly<R>& f, int n) {
  std::vector<UniPoly<R>> out;
  for (int i = 1; i <= n; ++i) {
    UniPoly<R> c = f.coeff_y(n - i);
    out.push_back(i % 2 == 0 ? c : UniPoly<R>(-c));
  }
  return out;
}

}  // namespace sovlat
