#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "curvcap/plane/measure.hpp"

namespace curvcap {

// Linear-growth constraints mu(B(x_j, r_l)) <= r_l for every atom x_j of a
// fixed support and every radius r_l = base * 2^l, l = 0..L-1, where r_{L-1}
// is the first such radius reaching the support diameter. Constraint index
// is j * L + l.
class GrowthConstraintSet {
 public:
  GrowthConstraintSet() = default;
  // base defaults to the support's resolution.
  explicit GrowthConstraintSet(const AtomicMeasure& support, std::optional<double> base = {});

  std::size_t size() const { return centers_.size() * radii_.size(); }
  std::size_t atom_count() const { return centers_.size(); }
  std::size_t level_count() const { return radii_.size(); }
  std::span<const double> radii() const { return radii_; }
  const Point& center(std::size_t c) const { return centers_[c / radii_.size()]; }
  double radius(std::size_t c) const { return radii_[c % radii_.size()]; }

  // Ball masses of the weights w (given in support order), one per constraint.
  std::vector<double> masses(std::span<const double> w) const;
  // min over constraints with positive mass of radius / mass; +inf if none.
  double feasible_scale(std::span<const double> w) const;

 private:
  std::vector<Point> centers_;
  std::vector<double> radii_;
  // first_level_[j * n + i]: smallest level whose ball around x_j holds x_i.
  std::vector<std::uint8_t> first_level_;
};

// s * m with s = min(1, feasible_scale); g must be built on m's support.
AtomicMeasure project_growth(const AtomicMeasure& m, const GrowthConstraintSet& g);
double projection_factor(const AtomicMeasure& m, const GrowthConstraintSet& g);

}  // namespace curvcap
