#include "curvcap/plane/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace curvcap {

Square Square::dilate(double lambda) const {
  Point c = center();
  double s = side * lambda;
  return {c - Point(s / 2, s / 2), s};
}

bool Square::contains_closed(const Point& p) const {
  return p.real() >= corner.real() && p.real() <= corner.real() + side &&
         p.imag() >= corner.imag() && p.imag() <= corner.imag() + side;
}

bool Square::contains_half_open(const Point& p) const {
  return p.real() >= corner.real() && p.real() < corner.real() + side &&
         p.imag() >= corner.imag() && p.imag() < corner.imag() + side;
}

double Square::gauge(const Point& p) const {
  Point d = p - center();
  return std::max(std::abs(d.real()), std::abs(d.imag())) / side;
}

Square dilate_square(const Square& q, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw std::invalid_argument("dilation factor must be positive");
  return q.dilate(factor);
}

bool contains_closed(const Ball& b, const Point& p) {
  return dist(b.center, p) <= b.radius;
}

double dist_to_square(const Square& q, const Point& p) {
  double dx = std::max({q.corner.real() - p.real(), 0.0, p.real() - (q.corner.real() + q.side)});
  double dy = std::max({q.corner.imag() - p.imag(), 0.0, p.imag() - (q.corner.imag() + q.side)});
  return std::hypot(dx, dy);
}

double dist_to_square_boundary(const Square& q, const Point& p) {
  if (!q.contains_closed(p)) return dist_to_square(q, p);
  double x0 = q.corner.real(), y0 = q.corner.imag();
  return std::min({p.real() - x0, x0 + q.side - p.real(), p.imag() - y0, y0 + q.side - p.imag()});
}

double dist_squares(const Square& a, const Square& b) {
  double dx = std::max({a.corner.real() - (b.corner.real() + b.side), 0.0,
                        b.corner.real() - (a.corner.real() + a.side)});
  double dy = std::max({a.corner.imag() - (b.corner.imag() + b.side), 0.0,
                        b.corner.imag() - (a.corner.imag() + a.side)});
  return std::hypot(dx, dy);
}

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  Point u = a - o, v = b - o;
  return u.real() * v.imag() - u.imag() * v.real();
}

}  // namespace

std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull(2 * pts.size());
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
  return hull;
}

double diameter(std::span<const Point> pts) {
  auto hull = convex_hull(std::vector<Point>(pts.begin(), pts.end()));
  double best = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i)
    for (std::size_t j = i + 1; j < hull.size(); ++j) best = std::max(best, dist(hull[i], hull[j]));
  return best;
}

}  // namespace curvcap
