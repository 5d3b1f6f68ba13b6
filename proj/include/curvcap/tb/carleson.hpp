#pragma once

#include <utility>
#include <vector>

#include "curvcap/plane/dyadic.hpp"
#include "curvcap/plane/measure.hpp"

namespace curvcap {

struct CarlesonResult {
  double c14 = 0.0;  // max over R with mu(R) > 0 of sum_{Q in R} a_Q / mu(R)
  double lhs = 0.0;  // sum over mu(Q) > 0 of a_Q |<f>_Q|^2
  double rhs = 0.0;  // 4 c14 ||f||^2
  bool holds = true;
};

// Packing constant of the family and the imbedding inequality for f. Repeated
// squares have their coefficients added.
CarlesonResult carleson_check(const DyadicLattice& lat, const AtomicMeasure& mu,
                              const std::vector<std::pair<DyadicSquare, double>>& a,
                              const std::vector<Complex>& f);

}  // namespace curvcap
