#pragma once

#include <complex>
#include <concepts>
#include <string>

#include <gmpxx.h>

namespace sovlat {

using Rational = mpq_class;
using Complex = std::complex<double>;

// Exact element of Q(i). There is deliberately no conversion to or from
// Complex, so exact and floating arithmetic cannot be mixed by accident.
class GaussRational {
 public:
  GaussRational() = default;
  GaussRational(int v) : re_(v) {}  // NOLINT(google-explicit-constructor)
  GaussRational(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {}

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  GaussRational conj() const { return {re_, -im_}; }
  Rational norm() const { return Rational(re_ * re_ + im_ * im_); }
  Complex to_complex() const { return {re_.get_d(), im_.get_d()}; }
  std::string str() const;

  GaussRational& operator+=(const GaussRational& o);
  GaussRational& operator-=(const GaussRational& o);
  GaussRational& operator*=(const GaussRational& o);
  GaussRational& operator/=(const GaussRational& o);

  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
  friend GaussRational operator-(const GaussRational& a) { return {-a.re_, -a.im_}; }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

 private:
  Rational re_{0};
  Rational im_{0};
};

inline bool is_zero(const GaussRational& x) { return x.is_zero(); }
inline bool is_zero(const Complex& x) { return x == Complex(0.0, 0.0); }
inline bool is_zero(double x) { return x == 0.0; }

inline Complex to_complex(const GaussRational& x) { return x.to_complex(); }
inline Complex to_complex(const Complex& x) { return x; }

// Trait describing how a scalar type behaves under the generic algorithms.
template <class R>
struct scalar_traits {
  static constexpr bool exact = false;
  static constexpr bool field = false;
};
template <>
struct scalar_traits<GaussRational> {
  static constexpr bool exact = true;
  static constexpr bool field = true;
};
template <>
struct scalar_traits<Complex> {
  static constexpr bool exact = false;
  static constexpr bool field = true;
};

template <class R>
concept Ring = requires(const R a, const R b) {
  { a + b } -> std::convertible_to<R>;
  { a - b } -> std::convertible_to<R>;
  { a * b } -> std::convertible_to<R>;
  { -a } -> std::convertible_to<R>;
  { is_zero(a) } -> std::same_as<bool>;
  R(0);
  R(1);
};

template <class R>
concept Field = Ring<R> && scalar_traits<R>::field && requires(const R a, const R b) {
  { a / b } -> std::convertible_to<R>;
};

template <class R>
concept ExactField = Field<R> && scalar_traits<R>::exact;

}  // namespace sovlat
