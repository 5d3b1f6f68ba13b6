#include "curvcap/kernels/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "curvcap/kernels/curvature.hpp"
#include "curvcap/util/parallel.hpp"

namespace curvcap {

RadialSup maximal_radial_detail(const AtomicMeasure& m, const Point& x, std::optional<double> r_min) {
  double floor_r = r_min.value_or(m.resolution());
  if (!(floor_r > 0.0)) throw std::invalid_argument("radius floor must be positive");
  std::vector<std::pair<double, double>> d;
  d.reserve(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) d.emplace_back(dist(x, m.position(i)), m.weight(i));
  std::sort(d.begin(), d.end());
  RadialSup best;
  double mass = 0.0;
  std::size_t k = 0;
  // Everything within the floor radius counts at r = floor.
  while (k < d.size() && d[k].first <= floor_r * (1.0 + kBallSlack)) mass += d[k++].second;
  if (mass > 0.0) best = {mass / floor_r, floor_r};
  while (k < d.size()) {
    double r = d[k].first;
    while (k < d.size() && d[k].first <= r * (1.0 + kBallSlack)) mass += d[k++].second;
    double v = mass / r;
    if (v > best.value) best = {v, r};
  }
  return best;
}

double maximal_radial(const AtomicMeasure& m, const Point& x, std::optional<double> r_min) {
  return maximal_radial_detail(m, x, r_min).value;
}

double maximal_radial(const ComplexAtomicMeasure& nu, const Point& x, std::optional<double> r_min) {
  return maximal_radial(nu.variation(), x, r_min);
}

double potential_U(const AtomicMeasure& m, const Point& x, std::optional<double> epsilon) {
  if (m.empty()) return 0.0;
  return maximal_radial(m, x) + std::sqrt(curvature_potential(m, x, epsilon));
}

double growth_constant(const AtomicMeasure& m) {
  std::vector<double> v(m.size());
  parallel_for(m.size(), [&](std::size_t i) { v[i] = maximal_radial(m, m.position(i)); });
  double best = 0.0;
  for (double x : v) best = std::max(best, x);
  return best;
}

}  // namespace curvcap
