#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "curvcap/fml/raster.hpp"
#include "curvcap/plane/measure.hpp"

namespace curvcap {

// Square of side rho 2^level covering raster cells [i 2^level, (i+1) 2^level)
// x [j 2^level, (j+1) 2^level).
struct WhitneySquare {
  int level = 0;
  std::int64_t i = 0;
  std::int64_t j = 0;
  Square geom;
};

struct WhitneyDecomposition {
  std::vector<WhitneySquare> squares;
  double contain_factor = 20.0;  // every lambda Q inside Omega
  double reach_factor = 60.0;    // every R Q meets the complement
  int overlap = 0;               // max over raster cell centers of sum chi_{10Q}
  std::size_t uncovered_cells = 0;  // cells of Omega too close to its boundary for any square
  RasterOpenSet omega;

  bool empty() const { return squares.empty(); }
  // Raster cells met by the open dilate lambda Q, as [i0, i1) x [j0, j1).
  std::array<std::int64_t, 4> dilate_cells(const WhitneySquare& q, double lambda) const;
  // Index of the square containing p, or -1.
  std::int64_t locate(const Point& p) const;
};

// Maximal grid-aligned dyadic squares Q with 20Q inside Omega. Containment is
// hereditary, so maximal squares are disjoint, and each parent fails it,
// which puts the complement inside 60Q.
WhitneyDecomposition whitney(const RasterOpenSet& omega);

// Max over cell centers of the number of squares whose closed lambda-dilate contains it.
int dilate_overlap(const WhitneyDecomposition& w, double lambda);

// Squares whose closed 2-dilate contains an atom of e.
std::vector<std::size_t> select_F(const WhitneyDecomposition& w, const AtomicMeasure& e);

}  // namespace curvcap
