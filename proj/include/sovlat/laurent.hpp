#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sovlat/scalar.hpp"

namespace sovlat {

inline constexpr int kMaxGenerators = 64;

/// Exponent vector over at most kMaxGenerators generators. Exponents may be
/// negative.
struct Monomial {
  std::array<std::int8_t, kMaxGenerators> e{};

  static Monomial unit(int index, int power = 1) {
    Monomial m;
    m.e[index] = static_cast<std::int8_t>(power);
    return m;
  }
  int total_degree(int count = kMaxGenerators) const {
    int d = 0;
    for (int i = 0; i < count; ++i) d += e[i];
    return d;
  }
  bool is_one() const {
    for (auto x : e)
      if (x != 0) return false;
    return true;
  }
  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m;
    for (int i = 0; i < kMaxGenerators; ++i) m.e[i] = static_cast<std::int8_t>(a.e[i] + b.e[i]);
    return m;
  }
  friend bool operator==(const Monomial&, const Monomial&) = default;
  // Descending lexicographic order: the first generator dominates.
  friend bool operator<(const Monomial& a, const Monomial& b) { return a.e > b.e; }
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept;
};

/// Sparse Laurent polynomial with rational coefficients over a fixed set of
/// generators, kept in canonical form: terms sorted by Monomial order with no
/// zero coefficients.
class LaurentPoly {
 public:
  struct Term {
    Monomial mono;
    Rational coeff;
    friend bool operator==(const Term&, const Term&) = default;
  };

  LaurentPoly() = default;
  LaurentPoly(int c) : LaurentPoly(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  explicit LaurentPoly(const Rational& c);
  LaurentPoly(Monomial m, const Rational& c);

  static LaurentPoly generator(int index, int power = 1) {
    return LaurentPoly(Monomial::unit(index, power), Rational(1));
  }
  /// Builds a polynomial from unsorted terms, combining repeated monomials.
  static LaurentPoly from_terms(std::vector<Term> terms);

  bool is_zero() const { return t_.empty(); }
  std::size_t size() const { return t_.size(); }
  const std::vector<Term>& terms() const { return t_; }
  bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_[0].mono.is_one()); }
  Rational constant_term() const;

  /// True when every term has the same total degree over the first `count`
  /// generators; that common degree is written to `degree`.
  bool is_homogeneous(int count, int& degree) const;

  LaurentPoly derivative(int index) const;
  LaurentPoly scaled(const Rational& c) const;
  LaurentPoly times_monomial(const Monomial& m) const;

  std::string str(const std::vector<std::string>& names) const;

  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator-(const LaurentPoly& a) { return a.scaled(Rational(-1)); }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

 private:
  std::vector<Term> t_;
};

inline bool is_zero(const LaurentPoly& p) { return p.is_zero(); }

template <>
struct scalar_traits<LaurentPoly> {
  static constexpr bool exact = true;
  static constexpr bool field = false;
};

/// A Laurent polynomial compiled for repeated floating-point evaluation.
class EvalPlan {
 public:
  EvalPlan() = default;
  explicit EvalPlan(const LaurentPoly& p);

  double operator()(std::span<const double> x) const { return eval<double>(x); }
  Complex operator()(std::span<const Complex> x) const { return eval<Complex>(x); }

  template <class S>
  S eval(std::span<const S> x) const {
    S acc(0);
    for (const auto& t : terms_) {
      S v(t.coeff);
      for (const auto& [var, pw] : t.factors) {
        if (pw > 0)
          for (int k = 0; k < pw; ++k) v = v * x[var];
        else
          for (int k = 0; k < -pw; ++k) v = v / x[var];
      }
      acc = acc + v;
    }
    return acc;
  }

 private:
  struct CompiledTerm {
    double coeff;
    std::vector<std::pair<int, int>> factors;
  };
  std::vector<CompiledTerm> terms_;
};

}  // namespace sovlat
