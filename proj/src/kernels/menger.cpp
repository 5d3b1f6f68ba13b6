#include "curvcap/kernels/menger.hpp"

#include <algorithm>
#include <array>

namespace curvcap {

double menger_c2(const Point& x, const Point& y, const Point& z) {
  for (const Point& p : {x, y, z})
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) return NAN;
  std::array<Point, 3> p{x, y, z};
  std::sort(p.begin(), p.end(), lex_less);
  return menger_c2_ordered(p[0], p[1], p[2]);
}

double menger_curvature(const Point& x, const Point& y, const Point& z) {
  return std::sqrt(menger_c2(x, y, z));
}

}  // namespace curvcap
