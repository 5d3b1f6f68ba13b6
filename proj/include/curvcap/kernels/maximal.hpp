#pragma once

#include <optional>

#include "curvcap/plane/measure.hpp"

namespace curvcap {

struct RadialSup {
  double value = 0.0;
  double radius = 0.0;
};

// sup over r >= r_min of mu(closed B(x, r)) / r, exact over the breakpoint
// radii max(|x - x_i|, r_min). r_min defaults to the measure's resolution.
RadialSup maximal_radial_detail(const AtomicMeasure& m, const Point& x,
                                std::optional<double> r_min = {});
double maximal_radial(const AtomicMeasure& m, const Point& x, std::optional<double> r_min = {});
double maximal_radial(const ComplexAtomicMeasure& nu, const Point& x, std::optional<double> r_min = {});

// U(x) = M mu(x) + c_mu(x).
double potential_U(const AtomicMeasure& m, const Point& x, std::optional<double> epsilon = {});

// Largest value of maximal_radial over the atoms of m.
double growth_constant(const AtomicMeasure& m);

}  // namespace curvcap
