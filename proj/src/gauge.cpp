#include <Eigen/Dense>
#include <map>
#include <random>
#include <sstream>

#include "sovlat/gauge_sov.hpp"

namespace sovlat {

int block_power(BlockRole role, int m) {
  switch (role) {
    case BlockRole::Top: return m;
    case BlockRole::NextTop: return m - 1;
    case BlockRole::One: return 1;
    case BlockRole::Bottom: return 0;
  }
  return 0;
}

std::string block_name(BlockRole role, const MonodromyClass& c) {
  const int n = c.N;
  switch (role) {
    case BlockRole::Top: return "mu_-^(" + std::to_string(c.n1) + ")";
    case BlockRole::Bottom: return "mu_+^(" + std::to_string(c.n2) + ")";
    case BlockRole::NextTop: {
      int i = n - 1 - c.n1;
      if (i <= n - 3) return i == 0 ? "mu_-^(0)" : "mu_-^(-" + std::to_string(i) + ")";
      return "mu_1";
    }
    case BlockRole::One: {
      int i = n - c.n2;
      if (i <= n - 3) return i == 0 ? "mu_+^(0)" : "mu_+^(-" + std::to_string(i) + ")";
      return "mu_" + std::to_string(c.m - 1);
    }
  }
  return {};
}

std::string GaugeRecipe::str() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) os << "; ";
    os << "e" << rows[i].basis;
    for (BlockRole r : rows[i].word) os << " " << block_name(r, cls);
  }
  os << ")";
  return os.str();
}

namespace {

using R = BlockRole;

struct TableEntry {
  const char* label;
  std::vector<GaugeRow> rows;
  std::vector<ExpectedBlock> expected;
};

// Keyed by (N, n1, n2) for N = 2, 3.
const std::map<std::tuple<int, int, int>, TableEntry>& small_table() {
  static const std::map<std::tuple<int, int, int>, TableEntry> table = {
      {{2, 1, 1}, {"N=2 (1,1)", {{1, {}}, {1, {R::NextTop}}}, {{R::Top, "00/**"}, {R::NextTop, "01/**"}}}},
      {{2, 1, 2}, {"N=2 (1,2)", {{2, {R::Top}}, {2, {}}}, {{R::Top, "*0/10"}, {R::Bottom, "0*/00"}}}},
      {{3, 1, 1},
       {"N=3 (1,1)",
        {{1, {}}, {1, {R::NextTop, R::Top}}, {1, {R::NextTop}}},
        {{R::Top, "000/***/010"}, {R::NextTop, "001/***/***"}}}},
      {{3, 2, 2},
       {"N=3 (2,2)",
        {{3, {R::Top}}, {3, {R::Top, R::Bottom}}, {3, {}}},
        {{R::Top, "000/*00/100"}, {R::Bottom, "010/00*/000"}}}},
      {{3, 1, 3},
       {"N=3 (1,3)",
        {{1, {}}, {1, {R::Bottom, R::One}}, {1, {R::Bottom}}},
        {{R::Top, "000/***/***"}, {R::One, "***/***/010"}, {R::Bottom, "001/000/000"}}}},
      {{3, 2, 1},
       {"N=3 (2,1)",
        {{3, {R::Top}}, {3, {R::Top, R::Bottom}}, {3, {}}},
        {{R::Top, "000/*00/100"}, {R::Bottom, "010/***/00*"}}}},
      {{3, 1, 2},
       {"N=3 (1,2)",
        {{1, {}}, {1, {R::Bottom, R::Bottom}}, {1, {R::Bottom}}},
        {{R::Top, "000/***/***"}, {R::Bottom, "001/000/010"}}}},
      {{3, 2, 3},
       {"N=3 (2,3)",
        {{3, {R::One}}, {3, {R::One, R::Top}}, {3, {}}},
        {{R::Top, "010/000/0*0"}, {R::One, "***/***/100"}, {R::Bottom, "000/00*/000"}}}},
  };
  return table;
}

}  // namespace

bool has_gauge_recipe(const MonodromyClass& c) {
  if (c.N < 2 || c.m < 1 || c.n1 < 1 || c.n1 > c.N - 1 || c.n2 < 1 || c.n2 > c.N) return false;
  if (!class_is_admissible(c)) return false;
  if (c.N <= 3) return small_table().count({c.N, c.n1, c.n2}) > 0;
  return c.n1 == 1 && c.n2 == 1;
}

GaugeRecipe gauge_recipe(const MonodromyClass& c) {
  validate_class(c);
  if (!has_gauge_recipe(c)) throw UnimplementedClassError(c.str());
  GaugeRecipe r;
  r.cls = MonodromyClass{c.N, c.m, c.n1, c.n2, c.lattice};
  if (c.N <= 3) {
    const auto& e = small_table().at({c.N, c.n1, c.n2});
    r.rows = e.rows;
    r.expected = e.expected;
    r.label = e.label;
    return r;
  }
  r.label = "general N";
  r.rows.push_back({1, {}});
  for (int k = c.N - 2; k >= 0; --k) {
    GaugeRow row{1, {R::NextTop}};
    for (int j = 0; j < k; ++j) row.word.push_back(R::Top);
    r.rows.push_back(std::move(row));
  }
  return r;
}

int closed_form_genus(const MonodromyClass& c) {
  if (!has_gauge_recipe(c)) throw UnimplementedClassError(c.str());
  const int m = c.m;
  if (c.N == 2) return m - 1;
  if (c.N == 3) {
    if ((c.n1 == 1 && c.n2 == 1) || (c.n1 == 1 && c.n2 == 2)) return 3 * m - 2;
    if (c.n1 == 2 && c.n2 == 3) return 3 * m - 4;
    return 3 * m - 3;
  }
  return (c.N - 1) * (c.N * m - 2) / 2;
}

int numeric_rank(const std::vector<std::vector<Complex>>& rows, double threshold, bool* ambiguous) {
  if (rows.empty()) {
    if (ambiguous) *ambiguous = false;
    return 0;
  }
  const Eigen::Index cols = static_cast<Eigen::Index>(rows.front().size());
  std::vector<double> norms;
  double largest = 0;
  for (const auto& row : rows) {
    double nrm = 0;
    for (const auto& x : row) nrm += std::norm(x);
    norms.push_back(std::sqrt(nrm));
    largest = std::max(largest, norms.back());
  }
  std::vector<Eigen::Index> keep;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (norms[i] > 1e-12 * largest) keep.push_back(static_cast<Eigen::Index>(i));
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(keep.size()), cols);
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    const auto& row = rows[keep[r]];
    const double nrm = norms[keep[r]];
    for (Eigen::Index j = 0; j < cols; ++j) a(r, j) = row[j] / nrm;
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
  auto rank_at = [&lu](double t) {
    lu.setThreshold(t);
    return static_cast<int>(lu.rank());
  };
  int r = rank_at(threshold);
  if (ambiguous) *ambiguous = rank_at(1e-6) != rank_at(1e-10);
  return r;
}

namespace {

std::vector<Complex> gradient_row(const Dual& x, int count) {
  std::vector<Complex> g(count, 0.0);
  for (int i = 0; i < count; ++i) g[i] = x.d(i);
  return g;
}

}  // namespace

DimensionReport level_set_dimension(const MonodromyClass& c, Level which, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int count = free_parameter_count(c);
  auto values = random_complex_coefficients(c, rng);
  std::vector<Dual> params;
  params.reserve(count);
  for (int i = 0; i < count; ++i) params.push_back(Dual::variable(values[i], i, count));
  auto t = build_T<Dual>(c, params);

  std::vector<std::vector<Complex>> curve_rows;
  auto f = char_poly(t);
  for (const auto& [key, coeff] : f.terms())
    if (key.second < c.N) curve_rows.push_back(gradient_row(coeff, count));

  DimensionReport rep;
  rep.parameters = count;
  bool amb1 = false, amb2 = false, amb3 = false;
  rep.rank_curve = numeric_rank(curve_rows, 1e-8, &amb1);
  if (which == Level::T) {
    rep.dimension = count - rep.rank_curve;
    rep.indeterminate = amb1;
    return rep;
  }

  auto rm = apply_gauge(t, gauge_recipe(c));
  std::vector<std::vector<Complex>> gauge_rows;
  for (int p = 0; p <= rm.M.degree(); ++p) {
    const SquareMatrix<Dual> eta = rm.M.coefficient(p);
    for (const auto& x : eta.entries()) gauge_rows.push_back(gradient_row(x, count));
  }
  std::vector<std::vector<Complex>> joint = curve_rows;
  joint.insert(joint.end(), gauge_rows.begin(), gauge_rows.end());
  rep.rank_gauge = numeric_rank(gauge_rows, 1e-8, &amb2);
  rep.rank_joint = numeric_rank(joint, 1e-8, &amb3);
  rep.dimension = rep.rank_joint - rep.rank_curve;
  rep.indeterminate = amb1 || amb2 || amb3;
  return rep;
}

}  // namespace sovlat
