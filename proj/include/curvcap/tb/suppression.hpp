#pragma once

#include <vector>

#include "curvcap/plane/geometry.hpp"

namespace curvcap {

// Theta(x) = max(floor, dist(x, C \ W)) for W a finite union of open disks
// and open squares. Distance to the complement is computed exactly from the
// boundary pieces of W that no other piece covers.
class SuppressionProfile {
 public:
  SuppressionProfile() = default;
  SuppressionProfile(std::vector<Ball> disks, std::vector<Square> squares, double floor = 0.0);

  double operator()(const Point& x) const;
  double floor() const { return floor_; }
  bool in_region(const Point& x) const;  // x in the open set W
  const std::vector<Ball>& disks() const { return disks_; }
  const std::vector<Square>& squares() const { return squares_; }
  bool empty() const { return disks_.empty() && squares_.empty(); }

 private:
  bool in_interior(const Point& p) const;  // interior of W up to a boundary tolerance
  std::vector<Ball> disks_;
  std::vector<Square> squares_;
  double floor_ = 0.0;
  double tol_ = 0.0;
  std::vector<Point> fixed_candidates_;  // corners and pairwise boundary crossings on dW
};

}  // namespace curvcap
