#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sovlat/gauge_sov.hpp"
#include "sovlat/newton.hpp"

namespace sovlat {

SeparationKind separation_kind(const MonodromyClass& c) {
  if (c.N == 2) return c.n2 == 1 ? SeparationKind::N2Upper : SeparationKind::N2Lower;
  if (c.N == 3) return c.n1 == 1 ? SeparationKind::FirstRow : SeparationKind::LastRow;
  if (c.n1 != 1 || c.n2 != 1) throw UnimplementedClassError(c.str());
  return SeparationKind::FirstRow;
}

int normalization_index(SeparationKind k, int n) {
  switch (k) {
    case SeparationKind::N2Upper:
    case SeparationKind::FirstRow: return 1;
    case SeparationKind::N2Lower: return 2;
    case SeparationKind::LastRow: return n;
  }
  return 1;
}

Complex krylov_eigenvalue(const SquareMatrix<Complex>& t) {
  auto k = detail::krylov_parts(SeparationKind::FirstRow, t);
  const int n = k.n;
  Eigen::MatrixXcd d(n, n), kr(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d(i, j) = k.d[i * n + j];
  Eigen::RowVectorXcd row(n);
  for (int j = 0; j < n; ++j) row(j) = k.b[j];
  for (int r = 0; r < n; ++r) {
    kr.row(r) = row;
    row = row * d;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(kr, Eigen::ComputeFullV);
  Eigen::VectorXcd psi = svd.matrixV().col(n - 1);
  Complex num = psi.dot(d * psi);  // conjugates the first argument
  return num / psi.squaredNorm();
}

namespace detail {

SeparationResult finish_separation(SeparationKind kind, int n, UniPoly<Complex> b,
                                   const std::function<SquareMatrix<Complex>(Complex)>& eval_t) {
  SeparationResult out;
  out.kind = kind;
  out.a.assign(n, 0);
  out.a[normalization_index(kind, n) - 1] = 1;
  if (b.is_zero()) throw NonGenericPointError("separation polynomial vanishes identically");
  double scale = 0;
  for (const auto& c : b.coeffs()) scale = std::max(scale, std::abs(c));
  if (std::abs(b.leading()) <= 1e-12 * scale) throw NonGenericPointError("degenerate leading coefficient of B");
  out.B0 = b.leading();
  out.B = b;
  if (b.degree() == 0) return out;
  RootReport rr = poly_roots_trimmed(b, 1e-13);
  out.origin_multiplicity = rr.zero_multiplicity;
  for (const auto& r : rr.roots) {
    if (r.value == Complex(0)) continue;
    for (int k = 0; k < r.multiplicity; ++k) out.z.push_back(r.value);
  }
  for (Complex z : out.z) out.w.push_back(separation_A(kind, eval_t(z)));
  return out;
}

}  // namespace detail

Divisor divisor_from(const SeparationResult& sep, const BiPoly<Complex>& f, double tol) {
  Divisor d;
  std::size_t worst = 0;
  for (std::size_t i = 0; i < sep.z.size(); ++i) {
    Complex z = sep.z[i], w = sep.w[i];
    double scale = f.term_scale(z, w);
    double res = scale > 0 ? std::abs(f.eval_complex(z, w)) / scale : 0.0;
    d.points.push_back({z, w, res});
    if (res > d.max_residual) {
      d.max_residual = res;
      worst = i;
    }
  }
  if (d.max_residual > tol) {
    std::ostringstream os;
    os.precision(17);
    os << "divisor point " << worst + 1 << " (z=" << d.points[worst].z << ", w=" << d.points[worst].w
       << ") misses the curve: relative residual " << d.max_residual << " > " << tol;
    throw DivisorResidualError(os.str());
  }
  return d;
}

namespace {

double point_distance(const DivisorPoint& a, const DivisorPoint& b) {
  return std::abs(a.z - b.z) / std::max(1.0, std::abs(a.z)) + std::abs(a.w - b.w) / std::max(1.0, std::abs(a.w));
}

}  // namespace

double divisor_distance(const Divisor& a, const Divisor& b) {
  if (a.points.size() != b.points.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(b.points.size(), false);
  double worst = 0;
  for (const auto& p : a.points) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t j = 0; j < b.points.size(); ++j) {
      if (used[j]) continue;
      double dd = point_distance(p, b.points[j]);
      if (dd < best) {
        best = dd;
        arg = j;
      }
    }
    used[arg] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

std::vector<std::pair<int, int>> one_form_numerators(const BiPoly<Complex>& f) {
  std::vector<std::pair<int, int>> out;
  for (const auto& [a, b] : newton_polygon_of(f).interior) out.emplace_back(a - 1, b - 1);
  return out;
}

namespace {

Complex monomial_at(const std::pair<int, int>& e, Complex z, Complex w) {
  return std::pow(z, e.first) * std::pow(w, e.second);
}

}  // namespace

bool theta_test(const Divisor& p, const BiPoly<Complex>& f, double tol) {
  auto h = one_form_numerators(f);
  const auto g = static_cast<Eigen::Index>(h.size());
  if (static_cast<Eigen::Index>(p.points.size()) != g)
    throw std::invalid_argument("theta_test: divisor has " + std::to_string(p.points.size()) +
                                " points but the genus is " + std::to_string(g));
  if (g == 0) return false;
  Eigen::MatrixXcd m(g, g);
  double scale = 1;
  for (Eigen::Index j = 0; j < g; ++j) {
    for (Eigen::Index i = 0; i < g; ++i) m(i, j) = monomial_at(h[i], p.points[j].z, p.points[j].w);
    scale *= m.col(j).norm();
  }
  return std::abs(m.determinant()) <= tol * scale;
}

CanonicalBracketReport canonical_bracket_check(const MonodromyClass& c, const std::vector<int>& bracket_matrix,
                                               std::span<const double> x, const RealizedMonodromy& t) {
  const int l = static_cast<int>(x.size());
  const int total = static_cast<int>(std::lround(std::sqrt(double(bracket_matrix.size()))));
  const int nv = l + 1;
  std::vector<Dual> xd;
  for (int n = 0; n < l; ++n) xd.push_back(Dual::variable(x[n], n, nv));
  PolyMatrix<Dual> td = t(xd);
  PolyMatrix<Complex> tc = td.map_coeffs([](const Dual& v) { return v.value(); });
  SeparationResult sep = separation(tc, c);
  SeparationKind kind = sep.kind;
  UniPoly<Complex> dbdz = sep.B.derivative();

  CanonicalBracketReport rep;
  std::vector<std::vector<Complex>> gz, gw;
  std::vector<Complex> zs, ws;
  for (std::size_t i = 0; i < sep.z.size(); ++i) {
    Complex z = sep.z[i];
    double size = 0;
    for (int k = 0; k <= sep.B.degree(); ++k) size += std::abs(sep.B.coeff(k)) * std::pow(std::abs(z), k);
    double rel = std::abs(dbdz.eval(z)) * std::abs(z) / size;
    if (rel < 1e-8) {
      ++rep.skipped;
      rep.diagnostics.push_back("root " + std::to_string(i + 1) + " is nearly multiple; skipped");
      continue;
    }
    Dual zd = Dual::variable(z, l, nv);
    SquareMatrix<Dual> tz = td.eval<Dual>(zd);
    Dual b = separation_B(kind, tz);
    Dual a = separation_A(kind, tz);
    Complex bz = b.d(l);
    std::vector<Complex> dz(l), dw(l);
    for (int n = 0; n < l; ++n) {
      dz[n] = -b.d(n) / bz;
      dw[n] = a.d(n) + a.d(l) * dz[n];
    }
    gz.push_back(std::move(dz));
    gw.push_back(std::move(dw));
    zs.push_back(z);
    ws.push_back(a.value());
  }
  auto br = [&](const std::vector<Complex>& f, const std::vector<Complex>& g) {
    Complex acc = 0;
    for (int n = 0; n < l; ++n)
      for (int m = 0; m < l; ++m) {
        int cnm = bracket_matrix[n * total + m];
        if (cnm != 0) acc += double(cnm) * x[n] * x[m] * f[n] * g[m];
      }
    return acc;
  };
  rep.roots = static_cast<int>(zs.size());
  for (int i = 0; i < rep.roots; ++i)
    for (int j = 0; j < rep.roots; ++j) {
      if (i < j) {
        rep.max_zz = std::max(rep.max_zz, std::abs(br(gz[i], gz[j])) / std::abs(zs[i] * zs[j]));
        rep.max_ww = std::max(rep.max_ww, std::abs(br(gw[i], gw[j])) / std::abs(ws[i] * ws[j]));
      }
      Complex zw = br(gz[i], gw[j]);
      if (i == j) {
        rep.diagonal_ratio.push_back(zw / (zs[i] * ws[i]));
        zw -= 2.0 * zs[i] * ws[i];
      }
      rep.max_zw = std::max(rep.max_zw, std::abs(zw) / std::abs(zs[i] * ws[j]));
    }
  return rep;
}

double AbelReport::worst() const {
  double w = 0;
  for (double f : flatness) w = std::max(w, f);
  return w;
}

std::vector<Divisor> track_divisors(std::vector<Divisor> seq, double min_gap, std::size_t* collision) {
  std::size_t hit = seq.size();
  for (std::size_t k = 0; k < seq.size(); ++k) {
    auto& pts = seq[k].points;
    if (k > 0) {
      const auto& prev = seq[k - 1].points;
      if (prev.size() != pts.size()) {
        hit = std::min(hit, k);
        break;
      }
      std::vector<DivisorPoint> ordered;
      std::vector<bool> used(pts.size(), false);
      for (const auto& p : prev) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t j = 0; j < pts.size(); ++j) {
          if (used[j]) continue;
          double d = point_distance(p, pts[j]);
          if (d < best) {
            best = d;
            arg = j;
          }
        }
        used[arg] = true;
        ordered.push_back(pts[arg]);
      }
      pts = std::move(ordered);
    }
    for (std::size_t i = 0; i < pts.size() && hit == seq.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        if (std::abs(pts[i].z - pts[j].z) <= min_gap * std::max(1.0, std::abs(pts[i].z))) {
          hit = k;
          break;
        }
  }
  if (collision) *collision = hit;
  return seq;
}

AbelReport abel_linearity_probe(const std::vector<double>& times, const std::vector<Divisor>& divisors,
                                const BiPoly<Complex>& f, double min_gap) {
  if (times.size() != divisors.size()) throw std::invalid_argument("abel_linearity_probe: size mismatch");
  AbelReport rep;
  std::size_t stop = 0;
  auto tracked = track_divisors(divisors, min_gap, &stop);
  if (stop < tracked.size()) {
    rep.truncated = true;
    rep.diagnostic = "divisor points collide at sample " + std::to_string(stop) + " (t=" +
                     std::to_string(times[stop]) + "); probe truncated";
    tracked.resize(stop);
  }
  auto h = one_form_numerators(f);
  const std::size_t g = h.size();
  if (!tracked.empty() && tracked.front().points.size() != g)
    throw std::invalid_argument("abel_linearity_probe: divisor size differs from the genus");
  rep.mean.assign(g, 0.0);
  rep.flatness.assign(g, 0.0);
  if (tracked.size() < 5) {
    if (rep.diagnostic.empty()) rep.diagnostic = "fewer than five samples";
    return rep;
  }
  const double dt = times[1] - times[0];
  for (std::size_t k = 1; k + 1 < tracked.size(); ++k)
    if (std::abs((times[k + 1] - times[k]) - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
      throw std::invalid_argument("abel_linearity_probe: time grid is not uniform");

  BiPoly<Complex> fw = f.diff_y();
  std::vector<std::vector<Complex>> v;
  for (std::size_t k = 2; k + 2 < tracked.size(); ++k) {
    std::vector<Complex> vk(g, 0.0);
    for (std::size_t i = 0; i < g; ++i) {
      const auto& p = tracked[k].points[i];
      Complex zdot = ((tracked[k - 2].points[i].z - tracked[k + 2].points[i].z) +
                      8.0 * (tracked[k + 1].points[i].z - tracked[k - 1].points[i].z)) /
                     (12.0 * dt);
      Complex denom = fw.eval_complex(p.z, p.w);
      for (std::size_t j = 0; j < g; ++j) vk[j] += monomial_at(h[j], p.z, p.w) * zdot / denom;
    }
    v.push_back(std::move(vk));
  }
  rep.samples = v.size();
  for (const auto& vk : v)
    for (std::size_t j = 0; j < g; ++j) rep.mean[j] += vk[j];
  double speed = 0;
  for (std::size_t j = 0; j < g; ++j) {
    rep.mean[j] /= double(v.size());
    speed = std::max(speed, std::abs(rep.mean[j]));
  }
  const double denom = speed > 0 ? speed : 1.0;
  for (std::size_t j = 0; j < g; ++j)
    for (const auto& vk : v) rep.flatness[j] = std::max(rep.flatness[j], std::abs(vk[j] - rep.mean[j]) / denom);
  return rep;
}

}  // namespace sovlat
