#pragma once

#include <functional>
#include <vector>

#include "curvcap/plane/dyadic.hpp"
#include "curvcap/plane/measure.hpp"
#include "curvcap/tb/bad_squares.hpp"

namespace curvcap {

// For a lattice draw, which atoms of F lie in the total exceptional set W_D.
// Called concurrently for different trials.
using ExceptionalOracle = std::function<std::vector<char>(std::size_t trial, const DyadicLattice& lat)>;

class GSetEstimate {
 public:
  std::vector<Point> atoms;
  std::vector<double> weights;
  std::vector<std::vector<char>> in_w;  // [trial][atom]
  std::vector<DyadicLattice> lattices;
  std::vector<double> p1;               // per atom
  std::vector<char> in_g;               // p1 > (1 - delta2) / 2
  double mass_f = 0.0;
  double mass_g = 0.0;
  double bound = 0.0;                   // (1 - delta2) / (1 + delta2) mass_f
  double max_w_fraction = 0.0;          // max over trials of mu(W_D) / mu(F)
  bool hypothesis_met = false;          // every trial has mu(W_D) <= delta2 mu(F)
  bool bound_holds = false;             // mass_g >= bound (asserted only when hypothesis_met)
  double beta = 0.0;

  // beta-quantile over all ordered trial pairs of dist(x, F \ (W_i u W_j)).
  double phi(const Point& x) const;
  // p(x) = fraction of ordered pairs with x outside both sets (= p1^2).
  double pair_probability(std::size_t atom) const;
};

GSetEstimate g_set_estimate(const AtomicMeasure& F, const ExceptionalOracle& oracle, int N, double data_radius,
                            const TbConfig& cfg);

}  // namespace curvcap
