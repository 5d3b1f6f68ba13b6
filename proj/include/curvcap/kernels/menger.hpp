#pragma once

#include <cmath>

#include "curvcap/plane/geometry.hpp"

namespace curvcap {

// Relative tolerance below which a triple counts as collinear: the doubled
// area is compared against 1e-12 * (longest side) * max(longest side,
// largest coordinate magnitude).
inline constexpr double kCollinearTol = 1e-12;

// Relative slack for the truncation rule |x - y| > eps.
inline constexpr double kSeparationSlack = 1e-12;

inline bool separated(double d2, double eps) {
  double e = eps * (1.0 + kSeparationSlack);
  return d2 > e * e;
}

// a*b - c*d with one rounding error.
inline double diff_of_products(double a, double b, double c, double d) {
  double cd = c * d;
  double err = std::fma(-c, d, cd);
  double dop = std::fma(a, b, -cd);
  return dop + err;
}

// Squared Menger curvature for points already in lexicographic order.
// Coincident or collinear triples give 0.
inline double menger_c2_ordered(const Point& p0, const Point& p1, const Point& p2) {
  double ux = p1.real() - p0.real(), uy = p1.imag() - p0.imag();
  double vx = p2.real() - p0.real(), vy = p2.imag() - p0.imag();
  double wx = p2.real() - p1.real(), wy = p2.imag() - p1.imag();
  double a2 = ux * ux + uy * uy;
  double b2 = vx * vx + vy * vy;
  double c2 = wx * wx + wy * wy;
  double cross = diff_of_products(ux, vy, uy, vx);
  double side2 = std::fmax(a2, std::fmax(b2, c2));
  double lmax = std::fmax(std::fmax(std::fabs(p0.real()), std::fabs(p0.imag())),
                          std::fmax(std::fmax(std::fabs(p1.real()), std::fabs(p1.imag())),
                                    std::fmax(std::fabs(p2.real()), std::fabs(p2.imag()))));
  double scale2 = std::fmax(lmax * lmax, side2);
  double cross2 = cross * cross;
  if (!(a2 > 0.0) || !(b2 > 0.0) || !(c2 > 0.0)) return 0.0;
  if (cross2 <= kCollinearTol * kCollinearTol * side2 * scale2) return 0.0;
  return 4.0 * cross2 / (a2 * b2 * c2);
}

// Squared Menger curvature 1/R^2 of the circle through x, y, z.
double menger_c2(const Point& x, const Point& y, const Point& z);
// Menger curvature 1/R.
double menger_curvature(const Point& x, const Point& y, const Point& z);

}  // namespace curvcap
