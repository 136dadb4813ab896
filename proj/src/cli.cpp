#include "sovlat/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <random>

#include "sovlat/gauge_sov.hpp"
#include "sovlat/lotka_volterra.hpp"
#include "sovlat/newton.hpp"

namespace sovlat {

namespace {

using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  int N = 0;
  std::optional<int> L, m, n1, n2;
  std::optional<int> l_min, l_max;
  std::uint64_t seed = 1;
  double tol = 1e-8;
  double t_end = 10.0;
  double dt = 1e-3;
  std::string method = "rk4";
  int flow = 1;
  std::string init, out;
  std::string suite;
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}
std::string num(int x) { return std::to_string(x); }
std::string num(std::size_t x) { return std::to_string(x); }

Json class_json(const MonodromyClass& c) { return Json{{"m", num(c.m)}, {"n1", num(c.n1)}, {"n2", num(c.n2)}}; }

Json check(const std::string& name, bool ok, const std::string& residual) {
  return Json{{"name", name}, {"status", ok ? "PASS" : "FAIL"}, {"residual", residual}};
}

bool all_pass(const Json& checks) {
  for (const auto& c : checks)
    if (c["status"] != "PASS") return false;
  return !checks.empty();
}

int need_l(const Config& c) {
  if (!c.L) throw UsageError("--L is required");
  return *c.L;
}

MonodromyClass class_of(const Config& c) {
  const bool by_class = c.m || c.n1 || c.n2;
  if (by_class && c.L) throw UsageError("give either --L or --m/--n1/--n2, not both");
  if (c.L) {
    validate_lv(c.N, *c.L);
    return lax_product_class(c.N, *c.L);
  }
  if (!(c.m && c.n1 && c.n2)) throw UsageError("give --L or all of --m, --n1, --n2");
  MonodromyClass k{c.N, *c.m, *c.n1, *c.n2, std::nullopt};
  validate_class(k);
  return k;
}

int im_count(int n, int l) {
  if (!symbolic_within_caps(n, l)) return numeric_im_count(n, l);
  auto s = lv_structure(n, l);
  return extract_im(n, l, s, build_t_lv(n, l, s)).n_H();
}

std::vector<double> initial_state(const Config& c, int l) {
  if (c.init.empty()) return random_positive_state(l, c.seed);
  std::ifstream in(c.init);
  if (!in) throw std::runtime_error("cannot read " + c.init);
  Json j = Json::parse(in);
  std::vector<double> v;
  for (const auto& x : j.at("V")) v.push_back(x.is_string() ? std::stod(x.get<std::string>()) : x.get<double>());
  if (static_cast<int>(v.size()) != l)
    throw UsageError("init file has " + std::to_string(v.size()) + " values, expected L=" + std::to_string(l));
  return v;
}

Method method_of(const Config& c) {
  if (c.method == "rk4") return Method::Rk4;
  if (c.method == "dopri") return Method::Dopri5;
  throw UsageError("unknown method '" + c.method + "' (rk4 or dopri)");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f.precision(17);
  return f;
}

// ---------------------------------------------------------------------------

int cmd_classify(const Config& c, std::ostream& out) {
  Json j{{"N", num(c.N)}};
  MonodromyClass k = class_of(c);
  if (c.L) {
    const int l = *c.L;
    auto li = lattice_integers(c.N, l);
    j["L"] = num(l);
    j["class"] = class_json(k);
    for (auto [key, v] : {std::pair{"m", li.m}, {"n1", k.n1}, {"n2", k.n2}, {"m1", li.m1}, {"m2", li.m2},
                          {"k", li.k}, {"k1", li.k1}, {"k2", li.k2}})
      j[key] = num(v);
    j["g"] = num(lv_genus(c.N, l, c.seed));
    j["n_H"] = num(im_count(c.N, l));
    j["n0"] = num(center_spec(c.N, l).n0);
  } else {
    j["class"] = class_json(k);
    j["m"] = num(k.m);
    j["n1"] = num(k.n1);
    j["n2"] = num(k.n2);
    if (has_gauge_recipe(k)) j["g"] = num(closed_form_genus(k));
    j["recipe"] = has_gauge_recipe(k) ? "available" : "none";
  }
  j["seed"] = num(static_cast<std::size_t>(c.seed));
  out << j.dump(2) << "\n";
  return kExitPass;
}

Json verify_rtt(const Config& c) {
  Json checks = Json::array();
  auto one = lax_structure(c.N, 1);
  auto r1 = matrix_bracket_residual(local_lax(c.N, 1, one), one);
  checks.push_back(check("single_site_exact_zero", r1.is_zero(), num(r1.total_terms())));
  const int l = need_l(c);
  auto s = lax_structure(c.N, l);
  auto r = matrix_bracket_residual(symbolic_lax_product(c.N, l, s), s);
  checks.push_back(check("product_exact_zero", r.is_zero(), num(r.total_terms())));
  return checks;
}

Json verify_involution(const Config& c) {
  const int l = need_l(c);
  auto s = lv_structure(c.N, l);
  auto im = extract_im(c.N, l, s, build_t_lv(c.N, l, s));
  Json checks = Json::array();
  std::size_t bad = 0, pairs = 0;
  for (std::size_t i = 0; i < im.im.size(); ++i)
    for (std::size_t k = i + 1; k < im.im.size(); ++k, ++pairs)
      if (!bracket(im.im[i].value, im.im[k].value, s).is_zero()) ++bad;
  checks.push_back(check("integrals_commute_exact_zero", bad == 0, num(bad)));
  checks.push_back(check("integral_count", im.n_H() == lv_genus(c.N, l, c.seed), num(im.n_H())));
  return checks;
}

Json verify_center(const Config& c, Json& extra) {
  const int l = need_l(c);
  auto s = lv_structure(c.N, l);
  Json checks = Json::array();
  auto center = center_spec(c.N, l);
  std::size_t bad = 0;
  for (const auto& g : center.generators)
    for (int k = 0; k < l; ++k)
      if (!bracket(LaurentPoly::generator(k), g.value, s).is_zero()) ++bad;
  checks.push_back(check("generators_central_exact_zero", bad == 0, num(bad)));
  auto sharp = center_sharpness(c.N, l);
  checks.push_back(check("non_central_products_detected", sharp.sharp, num(sharp.non_central_k.size())));
  int sum = 0;
  for (int k : center.K0) sum += k;
  checks.push_back(check("n0_count", center.n0 == sum - int(center.K0.size()) + 1, num(center.n0)));
  Json gens = Json::array();
  for (const auto& g : center.generators) gens.push_back(g.value.str(s.names()));
  extra["n0"] = num(center.n0);
  extra["generators"] = num(center.n0);
  extra["generator_products"] = gens;
  return checks;
}

Json verify_pattern(const Config& c, const MonodromyClass& k) {
  Json checks = Json::array();
  if (!has_gauge_recipe(k)) {
    checks.push_back(check("gauge_recipe_available", false, "0"));
    return checks;
  }
  auto recipe = gauge_recipe(k);
  std::mt19937_64 rng(c.seed);
  int bad = 0, singular = 0;
  for (int trial = 0; trial < 20; ++trial) {
    auto coeffs = random_exact_coefficients(k, rng);
    try {
      auto rm = apply_gauge(build_T<GaussRational>(k, coeffs), recipe);
      if (!rm.pattern.ok) ++bad;
    } catch (const NonGenericPointError&) {
      ++singular;
    }
  }
  checks.push_back(check("representative_pattern", bad == 0 && singular < 20, num(bad)));
  if (c.L) {
    auto s = lv_structure(c.N, *c.L);
    auto t = build_t_lv(c.N, *c.L, s);
    auto expected = block_patterns(k);
    int mismatches = t.degree() == k.m ? 0 : 1;
    for (int p = 0; p <= std::min(k.m, t.degree()); ++p) {
      const auto coeff = t.coefficient(p);
      for (int e = 0; e < c.N * c.N; ++e)
        if (coeff.entries()[e].is_zero() == (expected[p].free[e] != 0)) ++mismatches;
    }
    checks.push_back(check("lv_zero_pattern_matches_class", mismatches == 0, num(mismatches)));
  }
  return checks;
}

Json verify_pq(const Config& c) {
  auto rep = pq_realization_check(c.N, need_l(c));
  Json checks = Json::array();
  checks.push_back(check("pq_brackets_exact", rep.passed(), num(rep.mismatches.size())));
  return checks;
}

Json verify_dimension(const Config& c, const MonodromyClass& k) {
  Json checks = Json::array();
  if (!has_gauge_recipe(k)) {
    checks.push_back(check("gauge_recipe_available", false, "0"));
    return checks;
  }
  const int g = closed_form_genus(k);
  auto m = level_set_dimension(k, Level::M, c.seed);
  auto t = level_set_dimension(k, Level::T, c.seed);
  checks.push_back(check("m_level_equals_genus", !m.indeterminate && m.dimension == g, num(m.dimension)));
  checks.push_back(check("gauge_reduces_by_N_minus_1", !t.indeterminate && t.dimension - m.dimension == k.N - 1,
                         num(t.dimension - m.dimension)));
  return checks;
}

int cmd_verify(const Config& c, std::ostream& out) {
  Json j{{"suite", c.suite}, {"N", num(c.N)}};
  if (c.L) {
    validate_lv(c.N, *c.L);
    j["L"] = num(*c.L);
  }
  Json extra = Json::object();
  Json checks;
  if (c.suite == "rtt") {
    checks = verify_rtt(c);
  } else if (c.suite == "involution") {
    checks = verify_involution(c);
  } else if (c.suite == "center") {
    checks = verify_center(c, extra);
  } else if (c.suite == "pattern") {
    auto k = class_of(c);
    j["class"] = class_json(k);
    checks = verify_pattern(c, k);
  } else if (c.suite == "pq") {
    checks = verify_pq(c);
  } else if (c.suite == "dimension") {
    auto k = class_of(c);
    j["class"] = class_json(k);
    checks = verify_dimension(c, k);
  } else {
    throw UsageError("unknown suite '" + c.suite + "'");
  }
  if (c.L && !j.contains("class")) j["class"] = class_json(lax_product_class(c.N, *c.L));
  for (auto& [key, v] : extra.items()) j[key] = v;
  j["checks"] = checks;
  j["seed"] = num(static_cast<std::size_t>(c.seed));
  out << j.dump(2) << "\n";
  return all_pass(checks) ? kExitPass : kExitCheckFailed;
}

Json model_header(const Config& c, const LVModel& m) {
  return Json{{"N", num(m.N)}, {"L", num(m.L)}, {"class", class_json(m.cls)}, {"g", num(lv_genus(m.N, m.L, c.seed))},
              {"n_H", num(m.im.n_H())}, {"n0", num(m.center.n0)}};
}

int cmd_simulate(const Config& c, std::ostream& out) {
  const int l = need_l(c);
  auto model = make_lv_model(c.N, l);
  auto v0 = initial_state(c, l);
  auto tr = integrate(model, c.flow, v0, c.t_end, c.dt, method_of(c));
  if (!c.out.empty()) {
    auto f = open_out(c.out);
    f << "t";
    for (int k = 1; k <= l; ++k) f << ",V_" << k;
    for (int k = 1; k <= model.im.n_H(); ++k) f << ",H_" << k;
    f << "\n";
    for (std::size_t s = 0; s < tr.t.size(); ++s) {
      f << num(tr.t[s]);
      for (double x : tr.v[s]) f << "," << num(x);
      for (double x : tr.h[s]) f << "," << num(x);
      f << "\n";
    }
  }
  Json j = model_header(c, model);
  j["flow"] = num(c.flow);
  j["method"] = c.method;
  j["samples"] = num(tr.t.size());
  Json checks = Json::array();
  checks.push_back(check("trajectory_complete", !tr.aborted, tr.aborted ? tr.diagnostic : "0"));
  checks.push_back(check("integrals_conserved", tr.max_drift_h <= c.tol, num(tr.max_drift_h)));
  checks.push_back(check("center_conserved", tr.max_drift_center <= c.tol, num(tr.max_drift_center)));
  checks.push_back(check("curve_conserved", tr.max_drift_curve <= c.tol, num(tr.max_drift_curve)));
  j["checks"] = checks;
  j["seed"] = num(static_cast<std::size_t>(c.seed));
  out << j.dump(2) << "\n";
  return all_pass(checks) ? kExitPass : kExitCheckFailed;
}

int cmd_divisor(const Config& c, std::ostream& out) {
  const int l = need_l(c);
  auto model = make_lv_model(c.N, l);
  auto v0 = initial_state(c, l);
  auto realize = [&](const std::vector<double>& v) {
    std::vector<Complex> z(v.begin(), v.end());
    return lv_monodromy<Complex>(c.N, std::span<const Complex>(z));
  };
  auto f = char_poly(realize(v0));
  auto tr = integrate(model, c.flow, v0, c.t_end, c.dt, method_of(c));
  std::vector<Divisor> seq;
  double residual = 0;
  for (const auto& v : tr.v) {
    seq.push_back(divisor(realize(v), model.cls, f));
    residual = std::max(residual, seq.back().max_residual);
  }
  std::size_t collision = 0;
  auto tracked = track_divisors(seq, 1e-6, &collision);
  auto abel = abel_linearity_probe(tr.t, seq, f);
  std::size_t theta_flags = 0;
  for (const auto& d : tracked) theta_flags += theta_test(d, f) ? 1 : 0;
  if (!c.out.empty()) {
    auto o = open_out(c.out);
    o << "t";
    const std::size_t g = tracked.empty() ? 0 : tracked.front().points.size();
    for (std::size_t i = 1; i <= g; ++i) o << ",Re_z" << i << ",Im_z" << i << ",Re_w" << i << ",Im_w" << i;
    o << "\n";
    for (std::size_t s = 0; s < tracked.size(); ++s) {
      o << num(tr.t[s]);
      for (const auto& p : tracked[s].points)
        o << "," << num(p.z.real()) << "," << num(p.z.imag()) << "," << num(p.w.real()) << "," << num(p.w.imag());
      o << "\n";
    }
  }
  Json j = model_header(c, model);
  j["flow"] = num(c.flow);
  j["samples"] = num(tr.t.size());
  j["theta_divisor_samples"] = num(theta_flags);
  Json flat = Json::array();
  for (double x : abel.flatness) flat.push_back(num(x));
  j["abel_flatness"] = flat;
  Json checks = Json::array();
  checks.push_back(check("trajectory_complete", !tr.aborted, tr.aborted ? tr.diagnostic : "0"));
  checks.push_back(check("divisor_on_curve", residual <= 1e-9, num(residual)));
  checks.push_back(check("abel_velocity_flat", !abel.truncated && abel.worst() <= 1e-6,
                         abel.truncated ? abel.diagnostic : num(abel.worst())));
  j["checks"] = checks;
  j["seed"] = num(static_cast<std::size_t>(c.seed));
  out << j.dump(2) << "\n";
  return all_pass(checks) ? kExitPass : kExitCheckFailed;
}

int cmd_table(const Config& c, std::ostream& out) {
  const int lo = c.l_min.value_or(2 * c.N - 1);
  if (!c.l_max) throw UsageError("--Lmax is required");
  validate_lv(c.N, lo);
  Json rows = Json::array();
  for (const auto& r : genus_table(c.N, lo, *c.l_max)) rows.push_back(Json{{"L", num(r.L)}, {"g", num(r.g)}});
  Json j{{"N", num(c.N)}, {"rows", rows}, {"seed", num(static_cast<std::size_t>(c.seed))}};
  out << j.dump(2) << "\n";
  return kExitPass;
}

int cmd_certify(const Config& c, std::ostream& out) {
  const int l = need_l(c);
  auto cert = certify(c.N, l);
  Json j{{"N", num(c.N)}, {"L", num(l)}, {"class", class_json(cert.cls)}, {"g", num(cert.g)},
         {"n_H", num(cert.n_H)}, {"n0", num(cert.n0)}};
  j["n_H_source"] = cert.symbolic_n_H ? "symbolic" : "jacobian_rank";
  Json checks = Json::array();
  checks.push_back(check("g_equals_n_H", cert.g == cert.n_H, num(cert.g - cert.n_H)));
  checks.push_back(check("2g_equals_L_minus_n0", 2 * cert.g == l - cert.n0, num(2 * cert.g - (l - cert.n0))));
  checks.push_back(check("gauge_recipe_available", cert.recipe, cert.recipe ? "0" : "1"));
  j["checks"] = checks;
  j["status"] = cert.passed ? "PASS" : "FAIL";
  j["seed"] = num(static_cast<std::size_t>(c.seed));
  out << j.dump(2) << "\n";
  return cert.passed ? kExitPass : kExitCheckFailed;
}

void add_common(CLI::App* sub, Config& c) {
  sub->add_option("--N", c.N, "matrix size N")->required();
  sub->add_option("--seed", c.seed, "random seed");
}

void add_length(CLI::App* sub, Config& c) { sub->add_option("--L", c.L, "chain length L"); }

void add_class(CLI::App* sub, Config& c) {
  sub->add_option("--m", c.m, "class degree m");
  sub->add_option("--n1", c.n1, "class index n1");
  sub->add_option("--n2", c.n2, "class index n2");
}

void add_flow(CLI::App* sub, Config& c) {
  sub->add_option("--t-end", c.t_end, "final time");
  sub->add_option("--dt", c.dt, "time step");
  sub->add_option("--method", c.method, "rk4 or dopri");
  sub->add_option("--flow", c.flow, "flow index i (1..n_H)");
  sub->add_option("--init", c.init, "JSON file {\"V\": [...]}");
  sub->add_option("--out", c.out, "CSV output path");
  sub->add_option("--tol", c.tol, "relative drift tolerance");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Separation of variables and spectral curves for periodic Lotka-Volterra lattices", "sovlat"};
  app.require_subcommand(1);
  Config c;

  auto* classify = app.add_subcommand("classify", "class (m; n1, n2), lattice integers, g, n_H, n0");
  add_common(classify, c);
  add_length(classify, c);
  add_class(classify, c);

  auto* verify = app.add_subcommand("verify", "exact and numeric verification suites");
  verify->add_option("suite", c.suite, "rtt, involution, center, pattern, pq or dimension")->required();
  add_common(verify, c);
  add_length(verify, c);
  add_class(verify, c);
  verify->add_option("--tol", c.tol, "numeric tolerance");

  auto* simulate = app.add_subcommand("simulate", "integrate a flow and monitor conservation");
  add_common(simulate, c);
  add_length(simulate, c);
  add_flow(simulate, c);

  auto* divisor_cmd = app.add_subcommand("divisor", "track the separation divisor along a flow");
  add_common(divisor_cmd, c);
  add_length(divisor_cmd, c);
  add_flow(divisor_cmd, c);

  auto* table = app.add_subcommand("table", "genus of the generic spectral curve for a range of L");
  add_common(table, c);
  table->add_option("--Lmin", c.l_min, "first L");
  table->add_option("--Lmax", c.l_max, "last L");

  auto* certify_cmd = app.add_subcommand("certify", "check g = n_H = (L - n0)/2");
  add_common(certify_cmd, c);
  add_length(certify_cmd, c);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*classify) return cmd_classify(c, out);
    if (*verify) return cmd_verify(c, out);
    if (*simulate) return cmd_simulate(c, out);
    if (*divisor_cmd) return cmd_divisor(c, out);
    if (*table) {
      if (!c.l_max) {
        if (c.N == 2) c.l_min = c.l_min.value_or(3), c.l_max = 12;
        else if (c.N == 3) c.l_min = c.l_min.value_or(5), c.l_max = 17;
      }
      return cmd_table(c, out);
    }
    if (*certify_cmd) return cmd_certify(c, out);
  } catch (const OutOfScopeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitUsage;
}

}  // namespace sovlat
