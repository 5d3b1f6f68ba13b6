#pragma once

#include <vector>

#include "curvcap/plane/geometry.hpp"

namespace curvcap {

// Greedy 5r-covering selection: balls are visited by decreasing radius (ties
// by lexicographic center, then input order) and kept when disjoint from all
// kept balls. Returns input indices in selection order. Every discarded ball
// meets a kept ball of at least its radius, hence lies in its 5-fold dilate.
std::vector<std::size_t> vitali_select(const std::vector<Ball>& balls);

}  // namespace curvcap
