#pragma once

#include <complex>
#include <span>
#include <vector>

namespace curvcap {

using Point = std::complex<double>;
using Complex = std::complex<double>;

inline bool lex_less(const Point& a, const Point& b) {
  return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

inline double dist2(const Point& a, const Point& b) { return std::norm(a - b); }
inline double dist(const Point& a, const Point& b) { return std::abs(a - b); }

struct Ball {
  Point center;
  double radius = 0.0;
};

// Axis-aligned square [x0, x0+side] x [y0, y0+side]; whether edges belong to
// it is decided by the caller.
struct Square {
  Point corner;
  double side = 0.0;

  Point center() const { return corner + Point(side / 2, side / 2); }
  // Concentric square with side scaled by lambda.
  Square dilate(double lambda) const;
  bool contains_closed(const Point& p) const;
  bool contains_half_open(const Point& p) const;
  // Sup-norm distance from the center, in units of side.
  double gauge(const Point& p) const;
};

bool contains_closed(const Ball& b, const Point& p);
// Concentric dilation; throws unless factor > 0.
Square dilate_square(const Square& q, double factor);
// Euclidean distance from p to the closed square (0 inside).
double dist_to_square(const Square& q, const Point& p);
// Euclidean distance from p to the boundary of the square.
double dist_to_square_boundary(const Square& q, const Point& p);
// Distance between two closed squares.
double dist_squares(const Square& a, const Square& b);

// Vertices of the convex hull, counter-clockwise.
std::vector<Point> convex_hull(std::vector<Point> pts);
double diameter(std::span<const Point> pts);

}  // namespace curvcap
