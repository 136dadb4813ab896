#include "sovlat/newton.hpp"

#include <algorithm>
#include <numeric>

namespace sovlat {
namespace {

long cross(const LatticePoint& o, const LatticePoint& a, const LatticePoint& b) {
  return long(a.first - o.first) * (b.second - o.second) -
         long(a.second - o.second) * (b.first - o.first);
}

}  // namespace

NewtonPolygon newton_polygon(std::vector<LatticePoint> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  NewtonPolygon np;
  np.support = pts;
  if (pts.size() < 3) throw DegenerateCurveError();

  // Andrew's monotone chain, dropping collinear points.
  std::vector<LatticePoint> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw DegenerateCurveError();
  np.hull = hull;

  long area2 = 0, boundary = 0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    area2 += long(a.first) * b.second - long(b.first) * a.second;
    boundary += std::gcd(std::abs(b.first - a.first), std::abs(b.second - a.second));
  }
  np.twice_area = area2;
  np.boundary_points = boundary;

  int xmin = pts.front().first, xmax = pts.back().first;
  int ymin = pts.front().second, ymax = ymin;
  for (const auto& p : pts) {
    ymin = std::min(ymin, p.second);
    ymax = std::max(ymax, p.second);
  }
  for (int b = ymin; b <= ymax; ++b)
    for (int a = xmin; a <= xmax; ++a) {
      bool inside = true;
      for (std::size_t i = 0; i < hull.size() && inside; ++i)
        inside = cross(hull[i], hull[(i + 1) % hull.size()], {a, b}) > 0;
      if (inside) np.interior.push_back({a, b});
    }
  long pick_interior = (area2 - boundary + 2) / 2;
  if (pick_interior != static_cast<long>(np.interior.size()))
    throw std::logic_error("newton_polygon: interior count disagrees with Pick's theorem");
  return np;
}

}  // namespace sovlat
