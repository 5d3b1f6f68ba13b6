#include "curvcap/capacity/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "curvcap/kernels/curvature.hpp"
#include "curvcap/kernels/maximal.hpp"
#include "curvcap/util/parallel.hpp"

namespace curvcap {

std::vector<double> atom_potentials(const AtomicMeasure& m, double epsilon) {
  if (m.empty()) return {};
  std::vector<double> p = CurvatureEngine(m.positions(), epsilon).potentials(m.weights());
  std::vector<double> u(m.size());
  parallel_for(m.size(), [&](std::size_t i) { u[i] = maximal_radial(m, m.position(i)) + std::sqrt(p[i]); });
  return u;
}

ExtremalDiagnostics extremal_diagnostics(const AtomicMeasure& sigma, double epsilon, double tolerance) {
  ExtremalDiagnostics d;
  if (sigma.empty()) return d;
  d.mass = sigma.mass();
  d.curvature = curvature_total(sigma, epsilon).total;
  d.ratio = d.mass > 0.0 ? d.curvature / d.mass : 0.0;
  std::vector<double> u = atom_potentials(sigma, epsilon);
  std::sort(u.begin(), u.end());
  d.u_min = u.front();
  const std::size_t n = u.size();
  d.u_median = n % 2 ? u[n / 2] : 0.5 * (u[n / 2 - 1] + u[n / 2]);
  d.alpha = d.u_min;
  d.non_extremal = d.ratio > 2.0 + tolerance;
  return d;
}

double potential_normalized_bound(const AtomicMeasure& m, double epsilon) {
  if (m.empty()) return 0.0;
  std::vector<double> u = atom_potentials(m, epsilon);
  double u_max = *std::max_element(u.begin(), u.end());
  if (!(u_max > 0.0)) return 0.0;
  return m.mass() / u_max;
}

}  // namespace curvcap
