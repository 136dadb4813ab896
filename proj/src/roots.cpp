#include "sovlat/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sovlat {
namespace {

Complex horner(const std::vector<Complex>& c, Complex x) {
  Complex acc = 0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

double term_scale(const std::vector<Complex>& c, Complex x) {
  double ax = std::abs(x), acc = 0, pw = 1;
  for (const Complex& ci : c) {
    acc += std::abs(ci) * pw;
    pw *= ax;
  }
  return acc;
}

std::vector<Complex> aberth(const std::vector<Complex>& c, int& iterations) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<Complex> dc(n);
  for (int i = 1; i <= n; ++i) dc[i - 1] = double(i) * c[i];

  // Initial radius from the geometric mean of the root moduli, with a
  // deterministic angular offset that avoids symmetric stalls.
  double radius = std::pow(std::abs(c[0] / c[n]), 1.0 / n);
  if (!(radius > 0) || !std::isfinite(radius)) radius = 1.0;
  std::vector<Complex> z(n);
  for (int k = 0; k < n; ++k) {
    double ang = 2 * std::numbers::pi * k / n + 0.4;
    z[k] = std::polar(radius, ang);
  }

  const int max_iter = 2000;
  std::vector<bool> done(n, false);
  for (iterations = 0; iterations < max_iter; ++iterations) {
    bool all_done = true;
    for (int k = 0; k < n; ++k) {
      if (done[k]) continue;
      Complex pv = horner(c, z[k]);
      if (pv == Complex(0)) {
        done[k] = true;
        continue;
      }
      Complex ratio = pv / horner(dc, z[k]);
      Complex sum = 0;
      for (int j = 0; j < n; ++j)
        if (j != k) sum += 1.0 / (z[k] - z[j]);
      Complex step = ratio / (1.0 - ratio * sum);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) step = ratio;
      z[k] -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z[k])))
        done[k] = true;
      else
        all_done = false;
    }
    if (all_done) break;
  }
  return z;
}

RootReport solve(std::vector<Complex> c, double tol) {
  RootReport rep;
  while (!c.empty() && c.back() == Complex(0)) c.pop_back();
  if (c.size() < 2) throw std::invalid_argument("poly_roots: polynomial must be nonconstant");
  std::size_t low = 0;
  while (c[low] == Complex(0)) ++low;
  rep.zero_multiplicity = static_cast<int>(low);
  std::vector<Complex> core(c.begin() + low, c.end());
  if (rep.zero_multiplicity > 0) rep.roots.push_back({Complex(0), rep.zero_multiplicity});
  if (core.size() < 2) return rep;

  std::vector<Complex> z = aberth(core, rep.iterations);

  // Residual test on each iterate before clustering.
  for (const Complex& r : z) {
    double res = std::abs(horner(core, r)) / std::max(term_scale(core, r), 1e-300);
    rep.max_residual = std::max(rep.max_residual, res);
  }
  if (rep.max_residual > tol) {
    std::ostringstream os;
    os << "poly_roots: residual " << rep.max_residual << " exceeds tolerance " << tol;
    throw std::runtime_error(os.str());
  }

  const double merge = 1e3 * tol;
  std::vector<bool> used(z.size(), false);
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (used[i]) continue;
    Complex sum = z[i];
    int count = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      if (used[j]) continue;
      if (std::abs(z[j] - z[i]) <= merge * std::max(1.0, std::abs(z[i]))) {
        used[j] = true;
        sum += z[j];
        ++count;
      }
    }
    rep.roots.push_back({sum / double(count), count});
  }
  std::sort(rep.roots.begin(), rep.roots.end(), [](const Root& a, const Root& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  return rep;
}

}  // namespace

RootReport poly_roots(const UniPoly<Complex>& p, double tol) { return solve(p.coeffs(), tol); }

RootReport poly_roots_trimmed(const UniPoly<Complex>& p, double trim_rel, double tol) {
  std::vector<Complex> c = p.coeffs();
  double mx = 0;
  for (const Complex& x : c) mx = std::max(mx, std::abs(x));
  for (Complex& x : c) {
    if (std::abs(x) > trim_rel * mx) break;
    x = 0;
  }
  return solve(std::move(c), tol);
}

std::vector<Complex> expand_roots(const RootReport& r) {
  std::vector<Complex> out;
  for (const Root& root : r.roots)
    for (int k = 0; k < root.multiplicity; ++k) out.push_back(root.value);
  return out;
}

}  // namespace sovlat
