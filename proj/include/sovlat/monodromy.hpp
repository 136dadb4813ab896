#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sovlat/bracket.hpp"
#include "sovlat/poly.hpp"

namespace sovlat {

/// Integers attached to a chain length L:
/// L = (N-1) m1 + k1 = N m2 + k2 = N(N-1) m + k.
struct LatticeIntegers {
  int L = 0, m = 0, m1 = 0, m2 = 0, k = 0, k1 = 0, k2 = 0;
};
LatticeIntegers lattice_integers(int n, int l);

struct MonodromyClass {
  int N = 0, m = 0, n1 = 0, n2 = 0;
  std::optional<LatticeIntegers> lattice;

  std::string str() const;
  friend bool operator==(const MonodromyClass& a, const MonodromyClass& b) {
    return a.N == b.N && a.m == b.m && a.n1 == b.n1 && a.n2 == b.n2;
  }
};

/// Validates 1 <= n1 <= N-1, 1 <= n2 <= N, m >= 1.
void validate_class(const MonodromyClass& c);
/// True when the class is in range and a generic instance has
/// deg f_{N-1} = (N-1)m - n1 + 1 and ord f_{N-1} = n2 - 1. Some m = 1 classes,
/// such as (1; 2, 3) at N = 3, fail this because their blocks collapse.
bool class_is_admissible(const MonodromyClass& c);

enum class MuKind { Minus, Plus, MinusZero, PlusZero, Full };

/// Boolean mask of free entries in an N x N coefficient matrix.
struct MuPattern {
  int N = 0;
  std::vector<std::uint8_t> free;  // row-major

  bool is_free(int r, int c) const { return free[r * N + c] != 0; }
  int count() const;
  MuPattern operator&(const MuPattern& o) const;
  std::string str() const;  // rows separated by '/', '*' free, '0' fixed
  friend bool operator==(const MuPattern&, const MuPattern&) = default;
};

/// Minus(i), i=1..N-1: entries with r >= i+1 and c <= r-i+1 (1-based).
/// Plus(i), i=1..N: entries with c >= r+i-1.
/// MinusZero(i), i=0..N-3, the pattern mu_-^(-i): entries with c <= r+i+1.
/// PlusZero(i), i=0..N-3, the pattern mu_+^(-i): entries with c >= r-i-1.
/// Full: every entry.
MuPattern mu_pattern(int n, MuKind kind, int index = 0);

/// Masks of the z^p coefficients of T_{m;n1,n2}, indexed by p = 0..m.
std::vector<MuPattern> block_patterns(const MonodromyClass& c);

/// Total number of free coefficients of the class.
int free_parameter_count(const MonodromyClass& c);

/// T_{m;n1,n2}(z) filled with `coeffs` in order of descending power of z and
/// row-major within each coefficient matrix.
template <Ring R>
PolyMatrix<R> build_T(const MonodromyClass& c, std::span<const R> coeffs) {
  auto masks = block_patterns(c);
  if (static_cast<int>(coeffs.size()) != free_parameter_count(c))
    throw std::invalid_argument("build_T: coefficient count does not match the class");
  std::vector<SquareMatrix<R>> blocks(c.m + 1, SquareMatrix<R>(c.N));
  std::size_t idx = 0;
  for (int p = c.m; p >= 0; --p)
    for (int r = 0; r < c.N; ++r)
      for (int col = 0; col < c.N; ++col)
        if (masks[p].is_free(r, col)) blocks[p](r, col) = coeffs[idx++];
  return PolyMatrix<R>::from_coefficients(blocks);
}

/// Small random nonzero Gaussian rationals for every free entry.
std::vector<GaussRational> random_exact_coefficients(const MonodromyClass& c, std::mt19937_64& rng);
/// Random complex coefficients of modulus between 0.5 and 2.
std::vector<Complex> random_complex_coefficients(const MonodromyClass& c, std::mt19937_64& rng);

/// Recovers (N, m, n1, n2) from the degree profile of F. Throws
/// std::domain_error("not in the T-family") when the profile is inconsistent.
template <Ring R>
MonodromyClass classify_F(const BiPoly<R>& f, int n);

/// The local Lax matrix at a site (1-based) built from the generators of a
/// lax_structure.
PolyMatrix<LaurentPoly> local_lax(int n, int site, const BracketStructure& s);

/// Local Lax matrix with numeric entries l = (l^(0), ..., l^(N)).
template <Ring R>
PolyMatrix<R> lax_matrix(int n, std::span<const R> l) {
  PolyMatrix<R> out(n);
  for (int k = 1; k <= n - 1; ++k) out(k - 1, k) = UniPoly<R>(l[k]);
  out(n - 1, 0) = out(n - 1, 0) + UniPoly<R>::monomial(l[n], 1);
  out(n - 1, 1) = out(n - 1, 1) + UniPoly<R>::monomial(l[0], 1);
  return out;
}

/// Ordered product L_L ... L_1: each new site multiplies from the left.
template <class M>
M ordered_product(const std::vector<M>& factors) {
  M acc = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) acc = factors[i] * acc;
  return acc;
}

/// Class of z^{-m2} L_L ... L_1, always cross-validated against the zero
/// pattern of an explicit product. Throws when formula and product disagree.
MonodromyClass lax_product_class(int n, int l);

/// Class predicted by the residue formula alone.
MonodromyClass lax_product_class_formula(int n, int l);
/// Class found by matching the explicit product pattern against every
/// candidate class; throws if none or several match.
MonodromyClass lax_product_class_bruteforce(int n, int l, std::uint64_t seed = 1);

struct CommutationReport {
  std::size_t center_pairs = 0, center_nonzero = 0;
  std::size_t involution_pairs = 0, involution_nonzero = 0;
  bool passed() const { return center_nonzero == 0 && involution_nonzero == 0; }
};

/// (i) every coefficient of every entry of T commutes with every coefficient
/// of Det T; (ii) coefficients of the characteristic polynomial commute.
CommutationReport verify_commutation(const PolyMatrix<LaurentPoly>& t, const BracketStructure& s);

/// The symbolic product L_L ... L_1 over lax_structure(n, l).
PolyMatrix<LaurentPoly> symbolic_lax_product(int n, int l, const BracketStructure& s);

}  // namespace sovlat
