#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "curvcap/capacity/growth.hpp"
#include "curvcap/plane/io.hpp"

namespace curvcap {

// mass^2 / (mass + c^2_eps(m)); 0 for zero mass.
double melnikov_functional(const AtomicMeasure& m, double epsilon = 0.0);

struct ScalingResult {
  double t = 1.0;
  double value = 0.0;
};

// Maximizes (tW)^2 / (tW + t^3 K) over 0 < t <= t_max.
ScalingResult optimal_scaling(double mass, double curvature,
                              double t_max = std::numeric_limits<double>::infinity());
// Same for the measure m; t_max is the largest growth-feasible scale.
ScalingResult optimal_scaling(const AtomicMeasure& m, const GrowthConstraintSet& g, double epsilon = 0.0);

struct OptimizerConfig {
  int max_iterations = 200;
  double tolerance = 1e-9;  // relative g improvement that counts as converged
  std::uint64_t seed = 0;   // recorded; the ascent itself draws no randomness
  double epsilon = 0.0;     // curvature truncation
  double initial_step = 0.5;
  double min_step = 1e-6;
  bool polish = true;
};

struct TraceRow {
  int iter = 0;
  double g_value = 0.0;
  double mass = 0.0;
  double curvature = 0.0;
  double scale = 1.0;
};

struct CapacityEstimate {
  double g_value = 0.0;
  AtomicMeasure sigma;
  double curvature = 0.0;
  double mass = 0.0;
  double potential_min = 0.0;
  double u_normalized_bound = 0.0;
  double derivative_check = 0.0;
  double polish_angle = 0.0;
  bool converged = false;
  int iterations = 0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::vector<TraceRow> trace;
};

// Alternating ascent for sup g over growth-admissible reweightings of the
// support. initial_weights (support order) replaces the support's own weights
// as the starting point.
CapacityEstimate optimize_gplus(const AtomicMeasure& support, const OptimizerConfig& cfg = {},
                                const std::optional<std::vector<double>>& initial_weights = {});

Json to_json(const CapacityEstimate& e);
std::string trace_csv(const std::vector<TraceRow>& trace);

}  // namespace curvcap
