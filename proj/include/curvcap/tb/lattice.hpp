#pragma once

#include <cstdint>
#include <vector>

#include "curvcap/plane/dyadic.hpp"
#include "curvcap/plane/measure.hpp"

namespace curvcap {

// D(w) with w uniform in [-2^(N-1), 2^(N-1))^2 drawn from (seed, draw_index).
// Throws unless data_radius <= 2^(N-3), which keeps B(0, data_radius) inside
// the top square for every w.
DyadicLattice random_lattice(std::uint64_t seed, std::uint64_t draw_index, int N, double data_radius,
                             int depth = 30);

// Smallest N with the support inside B(0, 2^(N-3)).
int lattice_exponent_for(const AtomicMeasure& mu);

struct SquareLabel {
  DyadicSquare square;
  double mass = 0.0;
  std::size_t atoms = 0;
  bool terminal = false;
};

struct SquareLabels {
  std::vector<SquareLabel> squares;  // squares with positive mass, top-down, down to max_depth
  double uncovered_mass = 0.0;  // mu(F \ cover)
  // The top square should always be transit; this flags a cover that swallows it.
  bool root_terminal = false;
};

// A square is terminal iff it is contained in the union `cover` (H_D u T_D).
bool is_terminal(const DyadicSquareSet& cover, const DyadicSquare& q);
SquareLabels classify_squares(const DyadicLattice& lat, const DyadicSquareSet& cover, const AtomicMeasure& mu,
                              int max_depth);

}  // namespace curvcap
