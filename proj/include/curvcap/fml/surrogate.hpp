#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "curvcap/plane/generators.hpp"
#include "curvcap/plane/measure.hpp"

namespace curvcap {

// Off-E evaluation lattice: points lo + spacing (a, b) covering the segment box
// padded by margin, keeping those at distance >= min_dist from E. The
// arclength discretization uses step h.
struct SurrogateGrid {
  double h = 0.0;
  double spacing = 0.0;
  double margin = 0.0;
  double min_dist = 0.0;
};

// h = diam/32, spacing = diam/64, margin = diam/4, min_dist = h: every length
// scales with E, so the surrogate is dilation covariant.
SurrogateGrid default_surrogate_grid(const SegmentFamily& e);

struct Surrogate {
  ComplexAtomicMeasure nu0;  // arclength / K
  AtomicMeasure arclength;
  double K = 0.0;            // max over the grid of |C(arclength)|
  Point argmax;
  SurrogateGrid grid;
  Point grid_origin;
  std::vector<Point> grid_points;
  double mass() const { return nu0.total().real(); }
};

// Stand-in for the Ahlfors-function measure: arclength on E normalized so its
// Cauchy transform has modulus <= 1 on the sampled grid.
Surrogate surrogate_nu0(const SegmentFamily& e, const SurrogateGrid& grid);
Surrogate surrogate_nu0(const SegmentFamily& e);

using BumpFunction = std::function<std::pair<double, Point>(const Point&)>;  // value, gradient

struct VitushkinBound {
  double max_modulus = 0.0;     // max over samples of |g C nu0 + (1/pi) int C nu0 dbar g / (z - xi)|
  double max_direct = 0.0;      // max over samples of |C(g nu0)| summed directly
  double max_discrepancy = 0.0; // max |formula - direct|
  std::size_t samples = 0;
};

// Evaluates the Vitushkin splitting of C(g nu0) at the surrogate grid points
// inside `sample_region`, with a quad_cells x quad_cells midpoint rule over
// `support` (a square containing supp g).
VitushkinBound vitushkin_localize(const Surrogate& s, const BumpFunction& g, const Square& support,
                                  const Square& sample_region, int quad_cells);

}  // namespace curvcap
