#include "curvcap/fml/partition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace curvcap {

PartitionOfUnity::PartitionOfUnity(const WhitneyDecomposition& w) : w_(&w) {
  for (std::size_t k = 0; k < w.squares.size(); ++k) {
    const auto& q = w.squares[k];
    index_[{q.level, {q.i, q.j}}] = k;
    if (std::find(levels_.begin(), levels_.end(), q.level) == levels_.end()) levels_.push_back(q.level);
  }
  std::sort(levels_.begin(), levels_.end());
}

std::pair<double, Point> PartitionOfUnity::bump(const Square& q, const Point& x) {
  const Point c = q.center();
  const double l = q.side;
  const double dx = (x.real() - c.real()) / l, dy = (x.imag() - c.imag()) / l;
  if (std::abs(dx) >= 1.0 || std::abs(dy) >= 1.0) return {0.0, Point(0, 0)};
  const double tx = 1.0 - dx * dx, ty = 1.0 - dy * dy;
  const double fx = tx * tx, fy = ty * ty;
  const double value = fx * fy;
  Point grad(-4.0 * dx * tx * fy / l, -4.0 * dy * ty * fx / l);
  return {value, grad};
}

std::vector<PartitionTerm> PartitionOfUnity::at(const Point& x) const {
  std::vector<PartitionTerm> terms;
  const auto& om = w_->omega;
  for (int level : levels_) {
    // 2Q spans half a side beyond Q, so only the 3 x 3 block around x's
    // level square can reach it.
    const double side = om.rho() * std::ldexp(1.0, level);
    const auto ci = static_cast<std::int64_t>(std::floor((x.real() - om.origin().real()) / side));
    const auto cj = static_cast<std::int64_t>(std::floor((x.imag() - om.origin().imag()) / side));
    for (std::int64_t di = -1; di <= 1; ++di)
      for (std::int64_t dj = -1; dj <= 1; ++dj) {
        auto it = index_.find({level, {ci + di, cj + dj}});
        if (it == index_.end()) continue;
        auto [v, g] = bump(w_->squares[it->second].geom, x);
        if (v > 0.0) terms.push_back({it->second, v, g});
      }
  }
  if (terms.empty()) throw std::invalid_argument("outside partition domain");
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.square < b.square; });
  double sum = 0.0;
  Point gsum(0, 0);
  for (const auto& t : terms) {
    sum += t.weight;
    gsum += t.gradient;
  }
  for (auto& t : terms) {
    t.gradient = (t.gradient * sum - t.weight * gsum) / (sum * sum);
    t.weight /= sum;
  }
  return terms;
}

double PartitionOfUnity::weight(std::size_t square, const Point& x) const {
  for (const auto& t : at(x))
    if (t.square == square) return t.weight;
  return 0.0;
}

}  // namespace curvcap
