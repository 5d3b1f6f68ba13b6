#include "curvcap/capacity/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "curvcap/util/parallel.hpp"

namespace curvcap {

GrowthConstraintSet::GrowthConstraintSet(const AtomicMeasure& support, std::optional<double> base) {
  if (support.empty()) return;
  double r0 = base.value_or(support.resolution());
  if (!(r0 > 0.0) || !std::isfinite(r0)) throw std::invalid_argument("constraint base radius must be positive");
  centers_.assign(support.positions().begin(), support.positions().end());
  std::vector<Point> pts(centers_);
  double diam = diameter(pts);
  for (double r = r0;; r *= 2.0) {
    radii_.push_back(r);
    if (r >= diam) break;
    if (radii_.size() >= 255) throw std::invalid_argument("support diameter too large for the base radius");
  }
  const std::size_t n = centers_.size(), levels = radii_.size();
  first_level_.assign(n * n, 0);
  parallel_for(n, [&](std::size_t j) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t l = 0;
      while (l < levels && !in_closed_ball(centers_[j], radii_[l], centers_[i])) ++l;
      first_level_[j * n + i] = static_cast<std::uint8_t>(l);
    }
  });
}

std::vector<double> GrowthConstraintSet::masses(std::span<const double> w) const {
  const std::size_t n = centers_.size(), levels = radii_.size();
  if (w.size() != n) throw std::invalid_argument("weight vector does not match the constraint support");
  std::vector<double> out(n * levels, 0.0);
  parallel_for(n, [&](std::size_t j) {
    double* row = out.data() + j * levels;
    const std::uint8_t* fl = first_level_.data() + j * n;
    for (std::size_t i = 0; i < n; ++i)
      if (fl[i] < levels) row[fl[i]] += w[i];
    for (std::size_t l = 1; l < levels; ++l) row[l] += row[l - 1];
  });
  return out;
}

double GrowthConstraintSet::feasible_scale(std::span<const double> w) const {
  std::vector<double> m = masses(w);
  double s = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < m.size(); ++c)
    if (m[c] > 0.0) s = std::min(s, radius(c) / m[c]);
  return s;
}

double projection_factor(const AtomicMeasure& m, const GrowthConstraintSet& g) {
  if (g.atom_count() != m.size()) throw std::invalid_argument("constraints were built on a different support");
  return std::min(1.0, g.feasible_scale(m.weights()));
}

AtomicMeasure project_growth(const AtomicMeasure& m, const GrowthConstraintSet& g) {
  double s = projection_factor(m, g);
  if (s == 1.0) return m;
  return m.scaled(s);
}

}  // namespace curvcap
