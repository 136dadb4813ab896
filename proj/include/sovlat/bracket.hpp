#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sovlat/laurent.hpp"
#include "sovlat/poly.hpp"

namespace sovlat {

/// Log-canonical Poisson structure {x_a, x_b} = C_ab x_a x_b on named
/// generators, with C an antisymmetric integer matrix.
class BracketStructure {
 public:
  BracketStructure() = default;
  BracketStructure(std::vector<std::string> names, std::vector<int> c);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  int coefficient(int a, int b) const { return c_[a * size() + b]; }
  std::optional<int> index_of(const std::string& name) const;

  /// Index of the auxiliary generator P0 subject to P0^root * prod(V) = 1,
  /// or -1 when the structure has no such generator.
  int p0_index() const { return p0_index_; }
  int p0_root() const { return p0_root_; }
  /// Number of leading generators that count toward polynomial degree.
  int degree_generators() const { return degree_count_; }

  void set_p0(int index, int root, int degree_generators);

 private:
  std::vector<std::string> names_;
  std::vector<int> c_;
  int p0_index_ = -1;
  int p0_root_ = 0;
  int degree_count_ = 0;
};

/// Periodic Lotka-Volterra structure on V_1..V_L:
/// {V_n, V_m} = 2 sum_{k=1}^{N-1} (delta_{m,n+k} - delta_{m,n-k}) V_n V_m,
/// indices modulo L, plus a commuting generator P0 with P0^N prod V = 1.
/// Requires L >= 2N-1.
BracketStructure lv_structure(int n, int l);

/// Generators p_1..p_L then q_1..q_L with {p_n, q_m} = delta_nm p_n q_m.
BracketStructure pq_structure(int l);

/// Local Lax generators l_n^(0..N) for `sites` sites, generator index
/// n*(N+1)+k. Within a site {l^0, l^1} = -l^0 l^1 and {l^0, l^N} = l^0 l^N.
BracketStructure lax_structure(int n, int sites);

/// The Poisson bracket {f, g} extended by the Leibniz rule.
LaurentPoly bracket(const LaurentPoly& f, const LaurentPoly& g, const BracketStructure& s);

/// Replaces P0^e by P0^(e mod N) prod(V)^(-floor(e/N)). Identity when the
/// structure has no P0 generator.
LaurentPoly reduce_p0(const LaurentPoly& f, const BracketStructure& s);

/// {T(z) (x) T(z')} - [r(z - z'), T(z) (x) T(z')] multiplied through by
/// (z - z'), stored as N^2 x N^2 entries, each a polynomial in (z, z') with
/// Laurent coefficients. Row (i,k), column (j,l) sits at index
/// ((i*N + k) * N^2 + (j*N + l)).
struct RttResidual {
  int n = 0;
  std::vector<BiPoly<LaurentPoly>> entries;

  bool is_zero() const;
  std::size_t nonzero_entries() const;
  std::size_t total_terms() const;
};

RttResidual matrix_bracket_residual(const PolyMatrix<LaurentPoly>& t, const BracketStructure& s);

}  // namespace sovlat
