#pragma once

#include <optional>

#include "curvcap/plane/measure.hpp"

namespace curvcap {

struct MvReport {
  double epsilon = 0.0;
  double lhs = 0.0;             // sum_x w_x |C_eps mu(x)|^2
  double curvature_term = 0.0;  // c^2_eps(mu) / 6
  double remainder = 0.0;       // lhs - curvature_term
  double mass = 0.0;
  double growth_constant = 0.0;
  bool growth_warning = false;  // growth constant above 10
};

inline constexpr double kGrowthWarning = 10.0;

MvReport mv_identity_report(const AtomicMeasure& m, std::optional<double> epsilon = {});

}  // namespace curvcap
