#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sovlat/dual.hpp"
#include "sovlat/monodromy.hpp"
#include "sovlat/poly.hpp"
#include "sovlat/roots.hpp"

namespace sovlat {

// ---------------------------------------------------------------------------
// Gauge recipes
// ---------------------------------------------------------------------------

/// Names a coefficient block of T by its role rather than its power.
///   Top       the z^m block, pattern mu_-^(n1)
///   NextTop   the z^(m-1) block, mu_1 or mu_-^(n1-N+1)
///   One       the z^1 block, mu_+^(n2-N) or mu_{m-1}
///   Bottom    the z^0 block, pattern mu_+^(n2)
enum class BlockRole { Top, NextTop, One, Bottom };

int block_power(BlockRole role, int m);
std::string block_name(BlockRole role, const MonodromyClass& c);

/// One row of S: basis row e_basis (1-based) times a product of blocks.
struct GaugeRow {
  int basis = 1;
  std::vector<BlockRole> word;
};

/// Expected zero/one layout of one coefficient of M. Characters: '0' must
/// vanish, '1' must equal one, '*' is unconstrained. Rows are separated by '/'.
struct ExpectedBlock {
  BlockRole role;
  std::string pattern;
};

struct GaugeRecipe {
  MonodromyClass cls;
  std::vector<GaugeRow> rows;
  std::vector<ExpectedBlock> expected;  // empty when no layout is printed
  std::string label;                    // "N=3 (ii)", "general N", ...

  std::string str() const;  // "(e1; e1 mu_1 mu_-^(1); e1 mu_1)"
};

/// Raised for classes outside the implemented table.
class UnimplementedClassError : public std::domain_error {
 public:
  explicit UnimplementedClassError(const std::string& cls)
      : std::domain_error("no gauge recipe for class " + cls +
                          ": existence of a gauge matrix for this class is an unproven conjecture") {}
};

/// Implemented table: every admissible N=2 and N=3 class, and (m;1,1) for
/// N >= 4. Throws UnimplementedClassError otherwise.
GaugeRecipe gauge_recipe(const MonodromyClass& c);
bool has_gauge_recipe(const MonodromyClass& c);

/// Genus predicted in closed form for an implemented class.
int closed_form_genus(const MonodromyClass& c);

class NonGenericPointError : public std::domain_error {
 public:
  explicit NonGenericPointError(const std::string& what) : std::domain_error("non-generic point: " + what) {}
};

namespace detail {

template <Field R>
double magnitude(const R& x) {
  return std::abs(to_complex(x));
}

/// Rows of S assembled from the coefficient blocks of T.
template <Field R>
SquareMatrix<R> gauge_matrix(const GaugeRecipe& r, const PolyMatrix<R>& t) {
  const int n = r.cls.N;
  const int m = r.cls.m;
  std::vector<SquareMatrix<R>> blocks;
  for (int p = 0; p <= m; ++p) blocks.push_back(t.coefficient(p));
  SquareMatrix<R> s(n);
  for (int i = 0; i < n; ++i) {
    std::vector<R> row(n, R(0));
    row[r.rows[i].basis - 1] = R(1);
    for (BlockRole role : r.rows[i].word) {
      const auto& b = blocks[block_power(role, m)];
      std::vector<R> next(n, R(0));
      for (int k = 0; k < n; ++k) {
        if (detail::zero(row[k])) continue;
        for (int j = 0; j < n; ++j) next[j] = next[j] + row[k] * b(k, j);
      }
      row = std::move(next);
    }
    for (int j = 0; j < n; ++j) s(i, j) = row[j];
  }
  return s;
}

template <Field R>
void require_invertible(const SquareMatrix<R>& s) {
  R d = s.det();
  if constexpr (scalar_traits<R>::exact) {
    if (detail::zero(d)) throw NonGenericPointError("gauge matrix is singular");
  } else {
    double scale = 1;
    for (int i = 0; i < s.size(); ++i) {
      double row = 0;
      for (int j = 0; j < s.size(); ++j) row += std::norm(to_complex(s(i, j)));
      scale *= std::sqrt(row);
    }
    if (!(std::abs(to_complex(d)) > 1e-12 * scale)) throw NonGenericPointError("gauge matrix is singular");
  }
}

}  // namespace detail

struct PatternCheck {
  bool ok = true;
  std::vector<std::string> violations;
};

/// M(z) = S T(z) S^{-1} together with the layout it is expected to have.
template <Field R>
struct RepresentativeMatrix {
  GaugeRecipe recipe;
  SquareMatrix<R> S;
  PolyMatrix<R> M;
  PatternCheck pattern;

  /// The coefficient matrix eta_p of z^p in M.
  SquareMatrix<R> eta(int p) const { return M.coefficient(p); }
};

/// Compares the coefficients of M with the expected layouts. Exact scalars
/// are compared exactly; float scalars within `tol` of 0 or 1, relative to
/// the largest entry of the block.
template <Field R>
PatternCheck check_pattern(const GaugeRecipe& r, const PolyMatrix<R>& m, double tol = 1e-9) {
  PatternCheck out;
  const int n = r.cls.N;
  if (m.degree() > r.cls.m || m.order() < 0) {
    out.ok = false;
    out.violations.push_back("degree of M exceeds m");
  }
  for (const auto& e : r.expected) {
    int p = block_power(e.role, r.cls.m);
    auto eta = m.coefficient(p);
    double scale = 1;
    for (const auto& x : eta.entries()) scale = std::max(scale, detail::magnitude(x));
    int row = 0, col = 0;
    for (char ch : e.pattern) {
      if (ch == '/') {
        ++row;
        col = 0;
        continue;
      }
      const R& x = eta(row, col);
      bool good = true;
      if constexpr (scalar_traits<R>::exact) {
        if (ch == '0') good = detail::zero(x);
        if (ch == '1') good = x == R(1);
      } else {
        if (ch == '0') good = detail::magnitude(x) <= tol * scale;
        if (ch == '1') good = std::abs(to_complex(x) - Complex(1)) <= tol * scale;
      }
      if (!good) {
        out.ok = false;
        out.violations.push_back("z^" + std::to_string(p) + " entry (" + std::to_string(row + 1) + "," +
                                 std::to_string(col + 1) + ") expected " + ch);
      }
      ++col;
    }
    if (row != n - 1) throw std::logic_error("malformed expected pattern " + e.pattern);
  }
  return out;
}

/// Applies the recipe to T. Throws NonGenericPointError when S is singular.
template <Field R>
RepresentativeMatrix<R> apply_gauge(const PolyMatrix<R>& t, const GaugeRecipe& r, double tol = 1e-9) {
  RepresentativeMatrix<R> out{r, detail::gauge_matrix(r, t), PolyMatrix<R>(r.cls.N), {}};
  detail::require_invertible(out.S);
  out.M = out.S * t * inverse(out.S);
  out.pattern = check_pattern(r, out.M, tol);
  return out;
}

// ---------------------------------------------------------------------------
// Separation of variables
// ---------------------------------------------------------------------------

/// Normalization used to define B(z) and the eigenvalue A(z).
///   N2Upper  a = e1: B = T12, w = T22
///   N2Lower  a = e2: B = T21, w = T11
///   FirstRow a = e1: B = Det(b; b d; ...; b d^(N-2)) with b = T[1, 2..N],
///            d = T[2..N, 2..N]
///   LastRow  (N=3) a = e3: b = T[3, 1..2], d = T[1..2, 1..2]
enum class SeparationKind { N2Upper, N2Lower, FirstRow, LastRow };

SeparationKind separation_kind(const MonodromyClass& c);
/// 1-based index of the normalization vector a.
int normalization_index(SeparationKind k, int n);

namespace detail {

template <Ring S>
struct KrylovParts {
  std::vector<S> b;
  std::vector<S> d;  // (N-1) x (N-1), row-major
  int n = 0;
};

template <Ring S>
KrylovParts<S> krylov_parts(SeparationKind kind, const SquareMatrix<S>& t) {
  const int n = t.size();
  KrylovParts<S> k;
  k.n = n - 1;
  if (kind == SeparationKind::FirstRow) {
    for (int j = 1; j < n; ++j) k.b.push_back(t(0, j));
    for (int i = 1; i < n; ++i)
      for (int j = 1; j < n; ++j) k.d.push_back(t(i, j));
  } else {
    for (int j = 0; j < n - 1; ++j) k.b.push_back(t(n - 1, j));
    for (int i = 0; i < n - 1; ++i)
      for (int j = 0; j < n - 1; ++j) k.d.push_back(t(i, j));
  }
  return k;
}

}  // namespace detail

/// The separation polynomial (or its value) from the entries of T. Works for
/// polynomial entries and for scalar entries alike.
template <Ring S>
S separation_B(SeparationKind kind, const SquareMatrix<S>& t) {
  if (kind == SeparationKind::N2Upper) return t(0, 1);
  if (kind == SeparationKind::N2Lower) return t(1, 0);
  auto k = detail::krylov_parts(kind, t);
  const int n = k.n;
  std::vector<S> rows;
  std::vector<S> cur = k.b;
  for (int r = 0; r < n; ++r) {
    rows.insert(rows.end(), cur.begin(), cur.end());
    if (r + 1 == n) break;
    std::vector<S> next(n, S(0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) next[j] = next[j] + cur[i] * k.d[i * n + j];
    cur = std::move(next);
  }
  return determinant(rows, n);
}

/// Eigenvalue of T(z_i) along the Krylov kernel for the FirstRow normalization.
Complex krylov_eigenvalue(const SquareMatrix<Complex>& t);

/// Eigenvalue w = A(z) at a root of B, from the scalar matrix T(z_i).
/// N=2 and N=3 use closed ratios; for N >= 4 the eigenvector of d in the
/// kernel of the Krylov rows is found numerically (Complex only).
template <Field S>
S separation_A(SeparationKind kind, const SquareMatrix<S>& t) {
  const int n = t.size();
  if (kind == SeparationKind::N2Upper) return t(1, 1);
  if (kind == SeparationKind::N2Lower) return t(0, 0);
  if (n == 3) {
    auto k = detail::krylov_parts(kind, t);
    // psi = (b1, -b0) spans the kernel of b; w is the eigenvalue of d along
    // psi, read off from either component. The printed ratio divides by b0
    // (FirstRow) or b1 (LastRow); the other component is used only when that
    // denominator vanishes, as it does identically in some representatives.
    const S& b0 = k.b[0];
    const S& b1 = k.b[1];
    double scale = 0;
    for (const auto& x : t.entries()) scale = std::max(scale, detail::magnitude(x));
    const double eps = 1e-13 * scale;
    bool use_b0 = kind == SeparationKind::FirstRow;
    if (detail::magnitude(use_b0 ? b0 : b1) <= eps) use_b0 = !use_b0;
    if (detail::magnitude(use_b0 ? b0 : b1) <= eps) throw NonGenericPointError("eigenvector of T is not determined");
    if (use_b0) return (b0 * k.d[3] - b1 * k.d[2]) / b0;
    return (k.d[0] * b1 - k.d[1] * b0) / b1;
  }
  if constexpr (std::is_same_v<S, Complex>) {
    return krylov_eigenvalue(t);
  } else {
    throw std::invalid_argument("separation_A: N >= 4 requires complex scalars");
  }
}

struct SeparationResult {
  SeparationKind kind = SeparationKind::N2Upper;
  std::vector<int> a;                 // normalization vector
  UniPoly<Complex> B;                 // separation polynomial
  Complex B0;                         // leading coefficient
  int origin_multiplicity = 0;        // f in B = B0 z^f prod (z - z_i)
  std::vector<Complex> z, w;          // separated variables
};

namespace detail {

SeparationResult finish_separation(SeparationKind kind, int n, UniPoly<Complex> b,
                                   const std::function<SquareMatrix<Complex>(Complex)>& eval_t);

}  // namespace detail

/// Separated variables of T (class given by `c`). Exact input is converted
/// to float for root extraction. Throws NonGenericPointError when the leading
/// coefficient of B is degenerate or an eigenvalue denominator vanishes.
template <Field R>
SeparationResult separation(const PolyMatrix<R>& t, const MonodromyClass& c) {
  SeparationKind kind = separation_kind(c);
  UniPoly<R> b = separation_B(kind, t.grid());
  PolyMatrix<Complex> tc = t.map_coeffs([](const R& x) { return to_complex(x); });
  UniPoly<Complex> bc = b.map([](const R& x) { return to_complex(x); });
  return detail::finish_separation(kind, c.N, std::move(bc),
                                   [&tc](Complex z) { return tc.template eval<Complex>(z); });
}

struct DivisorPoint {
  Complex z, w;
  double residual = 0;  // |F(z,w)| relative to the term scale
};

struct Divisor {
  std::vector<DivisorPoint> points;
  double max_residual = 0;
};

class DivisorResidualError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The divisor of T on the curve F = 0. Throws DivisorResidualError naming
/// the worst point when a residual exceeds `tol`.
Divisor divisor_from(const SeparationResult& sep, const BiPoly<Complex>& f, double tol = 1e-9);

template <Field R>
Divisor divisor(const PolyMatrix<R>& t, const MonodromyClass& c, const BiPoly<Complex>& f, double tol = 1e-9) {
  return divisor_from(separation(t, c), f, tol);
}

/// Largest relative distance between two divisors after matching each point
/// of `a` with its nearest unused point of `b`. Infinite when sizes differ.
double divisor_distance(const Divisor& a, const Divisor& b);

/// Exponents (i, j) of the one-form numerators z^i w^j: interior points of the
/// Newton polygon shifted by (-1, -1). For N = 2 curves these are z^0..z^(g-1)
/// whenever the polygon touches the w-axis.
std::vector<std::pair<int, int>> one_form_numerators(const BiPoly<Complex>& f);

/// True when Det(h_i(z_j, w_j)) vanishes to relative tolerance `tol`, i.e.
/// the divisor lies in the excluded set. Throws when |P| differs from g.
bool theta_test(const Divisor& p, const BiPoly<Complex>& f, double tol = 1e-9);

// ---------------------------------------------------------------------------
// Dimensions by rank
// ---------------------------------------------------------------------------

enum class Level { T, M };

struct DimensionReport {
  int parameters = 0;
  int rank_curve = 0;    // rank of point -> char-poly coefficients
  int rank_joint = 0;    // rank of point -> (char-poly coefficients, M coefficients)
  int rank_gauge = 0;    // rank of point -> M coefficients
  int dimension = 0;
  bool indeterminate = false;
};

/// Dimension of the level set {T}_F (Level::T) or of its image {M}_F under the
/// gauge (Level::M) through a random complex point of the class. Jacobians
/// come from forward-mode differentiation; ranks use full-pivot LU with a
/// relative pivot threshold of 1e-8.
DimensionReport level_set_dimension(const MonodromyClass& c, Level which, std::uint64_t seed = 1);

/// Rank of a complex matrix with relative pivot threshold `threshold`. The
/// flag is raised when thresholds 1e-6 and 1e-10 disagree.
int numeric_rank(const std::vector<std::vector<Complex>>& rows, double threshold, bool* ambiguous = nullptr);

// ---------------------------------------------------------------------------
// Canonical brackets and the Abel probe
// ---------------------------------------------------------------------------

/// T(z) as a function of the dynamical variables, evaluated with dual numbers.
using RealizedMonodromy = std::function<PolyMatrix<Dual>(std::span<const Dual>)>;

struct CanonicalBracketReport {
  int roots = 0;
  int skipped = 0;
  double max_zz = 0;  // max |{z_i,z_j}| / |z_i z_j|
  double max_ww = 0;  // max |{w_i,w_j}| / |w_i w_j|
  double max_zw = 0;  // max |{z_i,w_j} - 2 delta_ij z_i w_i| / |z_i w_j|
  std::vector<Complex> diagonal_ratio;  // {z_i,w_i} / (z_i w_i)
  std::vector<std::string> diagnostics;

  double max_deviation() const { return std::max({max_zz, max_ww, max_zw}); }
  bool passed(double tol) const { return roots > 0 && max_deviation() <= tol; }
};

/// Brackets of the separated variables under the log-canonical structure
/// {x_a, x_b} = C_ab x_a x_b on the variables `x`. Root derivatives come from
/// implicit differentiation of B(z; x) = 0.
CanonicalBracketReport canonical_bracket_check(const MonodromyClass& c, const std::vector<int>& bracket_matrix,
                                               std::span<const double> x, const RealizedMonodromy& t);

struct AbelReport {
  std::vector<Complex> mean;       // per one-form mean velocity
  std::vector<double> flatness;    // max_t |v_k(t) - mean_k| / max_j |mean_j|
  std::size_t samples = 0;         // time points used
  bool truncated = false;
  std::string diagnostic;

  double worst() const;
};

/// Matches the points of each divisor to the previous one by nearest
/// neighbour. Sets `collision` to the first index at which two points come
/// closer than `min_gap` (relative), or leaves it at the sequence size.
std::vector<Divisor> track_divisors(std::vector<Divisor> seq, double min_gap, std::size_t* collision);

/// Velocities v_k(t) = sum_i h_k(z_i,w_i) dz_i/dt / F_w(z_i,w_i) along a
/// divisor trajectory on a uniform time grid, with five-point central
/// differences. Points are tracked by nearest neighbour; the probe stops at
/// the first collision and reports itself truncated.
AbelReport abel_linearity_probe(const std::vector<double>& times, const std::vector<Divisor>& divisors,
                                const BiPoly<Complex>& f, double min_gap = 1e-6);

}  // namespace sovlat
