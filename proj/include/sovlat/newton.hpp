#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "sovlat/poly.hpp"

namespace sovlat {

using LatticePoint = std::pair<int, int>;

struct NewtonPolygon {
  std::vector<LatticePoint> support;
  std::vector<LatticePoint> hull;      // counterclockwise, no collinear vertices
  std::vector<LatticePoint> interior;  // strictly interior lattice points, sorted by (b, a)
  long twice_area = 0;
  long boundary_points = 0;

  int genus() const { return static_cast<int>(interior.size()); }
};

class DegenerateCurveError : public std::runtime_error {
 public:
  DegenerateCurveError()
      : std::runtime_error("curve is rational or reducible; genus test unavailable") {}
};

/// Newton polygon of a finite support set. Throws DegenerateCurveError when
/// the support is collinear.
NewtonPolygon newton_polygon(std::vector<LatticePoint> support);

template <Ring R>
NewtonPolygon newton_polygon_of(const BiPoly<R>& f) {
  std::vector<LatticePoint> pts;
  for (const auto& [k, v] : f.terms()) pts.push_back(k);
  return newton_polygon(std::move(pts));
}

/// Geometric genus of a generic curve with the Newton polygon of F: the
/// number of interior lattice points. Interior point (a, b) corresponds to the
/// holomorphic form z^(a-1) w^(b-1) dz / F_w.
template <Ring R>
int newton_genus(const BiPoly<R>& f) {
  return newton_polygon_of(f).genus();
}

}  // namespace sovlat
