#pragma once

#include <vector>

#include "curvcap/capacity/optimizer.hpp"
#include "curvcap/fml/partition.hpp"

namespace curvcap {

struct CircleInfo {
  std::size_t square = 0;  // index into the Whitney decomposition
  Point center;
  double gamma = 0.0;      // capacity estimate of E in the closed 2Q
  double radius = 0.0;
  bool clamped = false;    // gamma / 10 exceeded side / 4
  std::size_t atoms = 0;
  double length = 0.0;     // H^1 of the discretized circle
  Complex nu_mass;         // integral of g_i d nu0
};

struct MuNu {
  AtomicMeasure mu;
  ComplexAtomicMeasure nu;  // same positions as mu, in the same order
  std::vector<CircleInfo> circles;
  Complex nu0_total;
  Complex nu_total;
  double conservation_error = 0.0;  // |nu(F) - nu0(E)| / max(|nu0(E)|, tiny)
  double uncovered_nu0 = 0.0;       // |nu0| mass outside every 2Q_i
  double b_max = 0.0;               // max |dnu / dmu|
  std::size_t clamped = 0;

  // dnu / dmu at atom i of mu.
  Complex b(std::size_t i) const { return nu.weight(i) / mu.weight(i); }
};

// g-estimate of the atoms of e in the closed 2Q for each F square.
std::vector<double> gamma_estimates(const WhitneyDecomposition& w, const std::vector<std::size_t>& f,
                                    const AtomicMeasure& e, const OptimizerConfig& cfg = {});

// mu = sum of arclength on circles Gamma_i concentric with Q_i of radius
// gamma_i / 10 (at most side / 4), each with max(64, ceil(2 pi r / resolution))
// atoms; nu spreads int g_i d nu0 uniformly over Gamma_i.
MuNu build_mu_nu(const WhitneyDecomposition& w, const std::vector<std::size_t>& f, const ComplexAtomicMeasure& nu0,
                 const std::vector<double>& gamma, double resolution);

}  // namespace curvcap
