#pragma once

#include <vector>

#include "curvcap/plane/measure.hpp"

namespace curvcap {

// U(x_i) = M m(x_i) + c_m(x_i) at every atom, truncation epsilon.
std::vector<double> atom_potentials(const AtomicMeasure& m, double epsilon = 0.0);

struct ExtremalDiagnostics {
  double curvature = 0.0;
  double mass = 0.0;
  double ratio = 0.0;  // c^2 / mass
  double u_min = 0.0;
  double u_median = 0.0;
  double alpha = 0.0;
  bool non_extremal = false;  // ratio > 2 + tolerance
};

ExtremalDiagnostics extremal_diagnostics(const AtomicMeasure& sigma, double epsilon = 0.0,
                                         double tolerance = 0.1);

// mass / max_i U(x_i); 0 when every potential vanishes.
double potential_normalized_bound(const AtomicMeasure& m, double epsilon = 0.0);

}  // namespace curvcap
