#include "curvcap/plane/vitali.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace curvcap {

std::vector<std::size_t> vitali_select(const std::vector<Ball>& balls) {
  for (const auto& b : balls)
    if (!(b.radius >= 0.0) || !std::isfinite(b.radius))
      throw std::invalid_argument("ball radius must be finite and nonnegative");
  std::vector<std::size_t> order(balls.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (balls[a].radius != balls[b].radius) return balls[a].radius > balls[b].radius;
    return lex_less(balls[a].center, balls[b].center);
  });
  std::vector<std::size_t> kept;
  for (std::size_t k : order) {
    bool disjoint = true;
    for (std::size_t s : kept)
      if (dist(balls[k].center, balls[s].center) <= balls[k].radius + balls[s].radius) {
        disjoint = false;
        break;
      }
    if (disjoint) kept.push_back(k);
  }
  return kept;
}

}  // namespace curvcap
