#pragma once

#include <map>
#include <utility>
#include <vector>

#include "curvcap/fml/whitney.hpp"

namespace curvcap {

struct PartitionTerm {
  std::size_t square = 0;  // index into the decomposition
  double weight = 0.0;
  Point gradient;          // (d/dx, d/dy) of the weight
};

// g_i = phi_i / sum_j phi_j with the tensor bump
// phi_i = (1 - u^2)^2 (1 - v^2)^2, (u, v) = (x - c_i) / l(Q_i), zero outside
// 2Q_i. C^1, supported in 2Q_i, and summing to one wherever some 2Q_j is hit.
class PartitionOfUnity {
 public:
  explicit PartitionOfUnity(const WhitneyDecomposition& w);

  // Nonzero terms at x, in square order. Throws "outside partition domain"
  // when x lies in no open 2Q_i.
  std::vector<PartitionTerm> at(const Point& x) const;
  double weight(std::size_t square, const Point& x) const;
  // Unnormalized bump of one square and its gradient.
  static std::pair<double, Point> bump(const Square& q, const Point& x);

 private:
  const WhitneyDecomposition* w_;
  std::map<std::pair<int, std::pair<std::int64_t, std::int64_t>>, std::size_t> index_;
  std::vector<int> levels_;
};

}  // namespace curvcap
