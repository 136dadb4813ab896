#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sovlat/bracket.hpp"
#include "sovlat/dual.hpp"
#include "sovlat/laurent.hpp"
#include "sovlat/monodromy.hpp"

namespace sovlat {

/// Thrown for (N, L) combinations outside the certified range.
class OutOfScopeError : public std::domain_error {
 public:
  explicit OutOfScopeError(const std::string& what) : std::domain_error("out of proven scope: " + what) {}
};

/// Throws std::invalid_argument unless N >= 2 and L >= 2N-1.
void validate_lv(int n, int l);

// ---------------------------------------------------------------------------
// Monodromy of LV(N, L)
// ---------------------------------------------------------------------------

/// z^{-m2} M_L(z) ... M_1(z) with
/// M_n(z) = sum_k V_n E_{k,k+1} + z (-1)^{N-1} E_{N,1} + z (-1)^{N-2} E_{N,2}.
/// This is T_LV without its central prefactor P0^{N-1}.
template <Ring R>
PolyMatrix<R> lv_monodromy_core(int n, std::span<const R> v) {
  const int l = static_cast<int>(v.size());
  const int m2 = l / n;
  std::vector<PolyMatrix<R>> factors;
  factors.reserve(l);
  const R sign_a = (n - 1) % 2 == 0 ? R(1) : R(-1);
  const R sign_b = (n - 2) % 2 == 0 ? R(1) : R(-1);
  for (int site = 0; site < l; ++site) {
    PolyMatrix<R> mn(n);
    for (int k = 0; k + 1 < n; ++k) mn(k, k + 1) = UniPoly<R>(v[site]);
    mn(n - 1, 0) = mn(n - 1, 0) + UniPoly<R>::monomial(sign_a, 1);
    mn(n - 1, 1) = mn(n - 1, 1) + UniPoly<R>::monomial(sign_b, 1);
    factors.push_back(std::move(mn));
  }
  PolyMatrix<R> t = ordered_product(factors);
  if (t.order() < m2) throw std::logic_error("lv_monodromy: negative powers of z survive the shift");
  return t.shifted(-m2);
}

inline Complex lv_p0(Complex prod, int n) { return std::pow(prod, -1.0 / n); }
inline Dual lv_p0(const Dual& prod, int n) { return pow(prod, -1.0 / n); }

/// T_LV(z) = P0^{N-1} z^{-m2} M_L ... M_1 with P0 = (prod V)^{-1/N}.
template <Field S>
PolyMatrix<S> lv_monodromy(int n, std::span<const S> v) {
  S prod(1);
  for (const auto& x : v) prod = prod * x;
  S p0 = lv_p0(prod, n);
  S scale(1);
  for (int k = 0; k < n - 1; ++k) scale = scale * p0;
  auto t = lv_monodromy_core<S>(n, v);
  return t.map_coeffs([&scale](const S& x) { return scale * x; });
}

/// Symbolic T_LV over lv_structure(n, l), with P0 kept as a generator.
PolyMatrix<LaurentPoly> build_t_lv(int n, int l, const BracketStructure& s);

// ---------------------------------------------------------------------------
// Center
// ---------------------------------------------------------------------------

struct CenterGenerator {
  int k = 0, i = 0;  // P_k^(i) = prod_{n=0}^{L/k-1} V_{kn+i}
  LaurentPoly value;
};

struct CenterSpec {
  int N = 0, L = 0;
  std::vector<int> K;   // k in 1..N with (k|N or k|N-1) and k|L
  std::vector<int> K0;  // the largest k in K dividing N and the largest dividing N-1
  std::vector<CenterGenerator> generators;  // over K0
  int n0 = 0;
};

/// K, K0, the generators over K0, and n0 = sum_{K0} k - (|K0| - 1). Every
/// generator P_k^(i), k in K, is verified central by exact brackets.
CenterSpec center_spec(int n, int l);

/// P_k^(i) as a Laurent monomial over lv_structure generators.
LaurentPoly center_generator(int l, int k, int i);

struct CenterSharpness {
  std::vector<int> non_central_k;  // k' | L with k' not in K, 1 <= k' <= N
  bool sharp = true;               // each such k' has some non-central P_{k'}^(i)
};
CenterSharpness center_sharpness(int n, int l);

// ---------------------------------------------------------------------------
// Integrals of motion
// ---------------------------------------------------------------------------

struct IntegralOfMotion {
  LaurentPoly value;  // homogeneous in V, sign normalized
  int degree = 0;
  int raw_sign = 1;   // sign of the leading coefficient before normalization
  int f_index = 0;    // char-poly coefficient f_i it came from
  int z_power = 0;    // power of z in f_i
};

struct CentralCoefficient {
  LaurentPoly value;
  int f_index = 0, z_power = 0;
};

struct ImExtraction {
  std::vector<IntegralOfMotion> im;         // ordered by degree
  std::vector<CentralCoefficient> central;  // P0-stripped central coefficients
  int n_H() const { return static_cast<int>(im.size()); }
};

/// Symbolic caps for the exact char-poly expansion.
bool symbolic_within_caps(int n, int l);

/// Expands every char-poly coefficient of T_LV, strips P0 powers and splits
/// the coefficients into central ones and integrals of motion. Duplicates up
/// to a monomial factor are merged. Throws OutOfScopeError beyond the caps.
ImExtraction extract_im(int n, int l, const BracketStructure& s, const PolyMatrix<LaurentPoly>& t);

/// Number of integrals of motion independent modulo the center, from the
/// Jacobian rank at a random positive point: rank[D f; D P] - rank[D P].
int numeric_im_count(int n, int l, std::uint64_t seed = 1);

/// Genus of the generic spectral curve of T_LV, from the Newton polygon of an
/// instance with random positive rational V.
int lv_genus(int n, int l, std::uint64_t seed = 1);

// ---------------------------------------------------------------------------
// P/Q realization
// ---------------------------------------------------------------------------

struct PqReport {
  int pairs = 0;
  std::vector<std::pair<int, int>> mismatches;  // 1-based (n, m)
  bool passed() const { return mismatches.empty(); }
};

/// V_n = (P_n ... P_{n+N-1})^{-1} Q_n^{-1} Q_{n+N-1} over pq_structure(L).
LaurentPoly pq_v(int n, int l, int index);
PqReport pq_realization_check(int n, int l);

// ---------------------------------------------------------------------------
// Model and flows
// ---------------------------------------------------------------------------

struct LVModel {
  int N = 0, L = 0;
  BracketStructure s;
  MonodromyClass cls;
  PolyMatrix<LaurentPoly> T;
  ImExtraction im;
  CenterSpec center;

  /// Velocity dV_n/dt_i = {V_n, H_i} at `v`, 1 <= i <= n_H.
  std::vector<double> flow_field(int i, std::span<const double> v) const;
  /// Values of H_1..H_{n_H} and of the center generators at `v`.
  std::vector<double> im_values(std::span<const double> v) const;
  std::vector<double> center_values(std::span<const double> v) const;

  std::vector<std::vector<EvalPlan>> flow_plans;  // [i-1][n]
  std::vector<EvalPlan> im_plans, center_plans;
};

/// Builds T_LV, extracts the integrals of motion and the center, and compiles
/// the flow fields. Throws OutOfScopeError beyond the symbolic caps.
LVModel make_lv_model(int n, int l);

/// The closed form 2 V_n sum_{k=1}^{N-1} (V_{n+k} - V_{n-k}).
std::vector<double> bogoyavlensky_rhs(int n, std::span<const double> v);

/// Random positive reals in [0.5, 1.5].
std::vector<double> random_positive_state(int l, std::uint64_t seed);

enum class Method { Rk4, Dopri5 };

struct Trajectory {
  std::vector<double> t;
  std::vector<std::vector<double>> v;
  std::vector<std::vector<double>> h;  // H_j along the trajectory
  bool aborted = false;
  std::string diagnostic;

  double max_drift_h = 0;       // max_j max_t |H_j(t) - H_j(0)| / |H_j(0)|
  double max_drift_center = 0;  // same for the center generators
  double max_drift_curve = 0;   // same for every spectral-curve coefficient
};

/// Integrates flow i from v0 to t_end with step dt, sampling every step and
/// monitoring conservation. Aborts when some |V_n| drops below 1e-12.
Trajectory integrate(const LVModel& model, int i, std::vector<double> v0, double t_end, double dt,
                     Method method = Method::Rk4);

// ---------------------------------------------------------------------------
// Certificate
// ---------------------------------------------------------------------------

struct Certificate {
  int N = 0, L = 0;
  MonodromyClass cls;
  int g = 0, n_H = 0, n0 = 0;
  bool symbolic_n_H = false;  // n_H from exact extraction (else Jacobian rank)
  bool recipe = false;
  bool passed = false;
};

/// g (Newton genus), n_H and n0; passes iff g = n_H = (L - n0)/2 and a gauge
/// recipe exists for the class. N in {2, 3}, or N >= 4 with L = N(N-1)m.
Certificate certify(int n, int l);

struct TableRow {
  int L = 0, g = 0;
};
std::vector<TableRow> genus_table(int n, int l_min, int l_max);

}  // namespace sovlat
