#pragma once

#include <cmath>
#include <vector>

#include "sovlat/scalar.hpp"

namespace sovlat {

/// Forward-mode dual number over complex values carrying a full gradient.
/// An empty gradient stands for the zero gradient.
class Dual {
 public:
  Dual() = default;
  Dual(int v) : v_(double(v)) {}  // NOLINT(google-explicit-constructor)
  Dual(double v) : v_(v) {}       // NOLINT(google-explicit-constructor)
  Dual(Complex v) : v_(v) {}      // NOLINT(google-explicit-constructor)
  Dual(Complex v, std::vector<Complex> grad) : v_(v), d_(std::move(grad)) {}

  /// The variable with index `index` out of `count`, at value v.
  static Dual variable(Complex v, int index, int count) {
    std::vector<Complex> g(count, 0.0);
    g[index] = 1.0;
    return {v, std::move(g)};
  }

  Complex value() const { return v_; }
  const std::vector<Complex>& grad() const { return d_; }
  Complex d(int i) const { return i < static_cast<int>(d_.size()) ? d_[i] : Complex(0); }

  friend Dual operator+(const Dual& a, const Dual& b) { return {a.v_ + b.v_, combine(a.d_, 1.0, b.d_, 1.0)}; }
  friend Dual operator-(const Dual& a, const Dual& b) { return {a.v_ - b.v_, combine(a.d_, 1.0, b.d_, -1.0)}; }
  friend Dual operator-(const Dual& a) { return {-a.v_, combine(a.d_, -1.0, {}, 0.0)}; }
  friend Dual operator*(const Dual& a, const Dual& b) { return {a.v_ * b.v_, combine(a.d_, b.v_, b.d_, a.v_)}; }
  friend Dual operator/(const Dual& a, const Dual& b) {
    Complex inv = 1.0 / b.v_;
    Complex q = a.v_ * inv;
    return {q, combine(a.d_, inv, b.d_, -q * inv)};
  }
  friend bool operator==(const Dual& a, const Dual& b) { return a.v_ == b.v_ && a.d_ == b.d_; }

  bool is_zero() const {
    if (v_ != Complex(0)) return false;
    for (const auto& x : d_)
      if (x != Complex(0)) return false;
    return true;
  }

 private:
  static std::vector<Complex> combine(const std::vector<Complex>& a, Complex sa,
                                      const std::vector<Complex>& b, Complex sb) {
    std::vector<Complex> out(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += sa * a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += sb * b[i];
    return out;
  }

  Complex v_{0.0};
  std::vector<Complex> d_;
};

inline bool is_zero(const Dual& x) { return x.is_zero(); }
inline Complex to_complex(const Dual& x) { return x.value(); }

/// x^p for real p, using the principal branch.
inline Dual pow(const Dual& x, double p) {
  Complex v = std::pow(x.value(), p);
  Complex dv = p * std::pow(x.value(), p - 1);
  std::vector<Complex> g(x.grad().size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = dv * x.grad()[i];
  return {v, std::move(g)};
}

template <>
struct scalar_traits<Dual> {
  static constexpr bool exact = false;
  static constexpr bool field = true;
};

}  // namespace sovlat
