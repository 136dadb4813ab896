#pragma once

#include <vector>

#include "sovlat/poly.hpp"

namespace sovlat {

struct Root {
  Complex value;
  int multiplicity = 1;
};

struct RootReport {
  std::vector<Root> roots;  // clustered, each with its multiplicity
  int zero_multiplicity = 0;  // exact root at the origin stripped before iteration
  int iterations = 0;
  double max_residual = 0;  // relative residual |p(r)| / sum |c_i||r|^i
};

/// All complex roots of p by the Aberth-Ehrlich iteration. Exactly vanishing
/// low-order coefficients are removed first and reported as a root at 0.
/// Iterates that land within 1e3*tol of each other are merged into a single
/// root carrying multiplicity. Throws if p is constant or if a root fails the
/// relative residual test at tolerance `tol`.
RootReport poly_roots(const UniPoly<Complex>& p, double tol = 1e-10);

/// Same as poly_roots but also discards low-order coefficients whose modulus
/// is below `trim_rel` times the largest coefficient modulus.
RootReport poly_roots_trimmed(const UniPoly<Complex>& p, double trim_rel, double tol = 1e-10);

/// Flattened list of roots with repetitions, including the origin.
std::vector<Complex> expand_roots(const RootReport& r);

}  // namespace sovlat
