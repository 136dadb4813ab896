#include "sovlat/gauge_sov.hpp"
#include "sovlat/lotka_volterra.hpp"

namespace sovlat {

Certificate certify(int n, int l) {
  validate_lv(n, l);
  if (n >= 4 && l % (n * (n - 1)) != 0)
    throw OutOfScopeError("N >= 4 is certified only for L a multiple of N(N-1)");
  Certificate c;
  c.N = n;
  c.L = l;
  c.cls = lax_product_class(n, l);
  c.g = lv_genus(n, l);
  c.n0 = center_spec(n, l).n0;
  if (symbolic_within_caps(n, l)) {
    auto s = lv_structure(n, l);
    c.n_H = extract_im(n, l, s, build_t_lv(n, l, s)).n_H();
    c.symbolic_n_H = true;
  } else {
    c.n_H = numeric_im_count(n, l);
  }
  c.recipe = has_gauge_recipe(c.cls);
  c.passed = c.recipe && c.g == c.n_H && 2 * c.g == l - c.n0;
  return c;
}

std::vector<TableRow> genus_table(int n, int l_min, int l_max) {
  std::vector<TableRow> rows;
  for (int l = l_min; l <= l_max; ++l) rows.push_back({l, lv_genus(n, l)});
  return rows;
}

}  // namespace sovlat
