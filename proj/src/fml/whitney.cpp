#include "curvcap/fml/whitney.hpp"

#include <algorithm>
#include <cmath>

namespace curvcap {

std::array<std::int64_t, 4> WhitneyDecomposition::dilate_cells(const WhitneySquare& q, double lambda) const {
  // In cell units Q spans [i s, (i+1) s); the dilate spans the same center
  // with half-width lambda s / 2. Cells meeting its interior:
  const double s = std::ldexp(1.0, q.level);
  const double cx = (static_cast<double>(q.i) + 0.5) * s, cy = (static_cast<double>(q.j) + 0.5) * s;
  const double h = lambda * s / 2.0;
  auto lo = [](double a) { return static_cast<std::int64_t>(std::floor(a)); };
  auto hi = [](double b) { return static_cast<std::int64_t>(std::ceil(b)); };
  return {lo(cx - h), hi(cx + h), lo(cy - h), hi(cy + h)};
}

std::int64_t WhitneyDecomposition::locate(const Point& p) const {
  for (std::size_t k = 0; k < squares.size(); ++k)
    if (squares[k].geom.contains_half_open(p)) return static_cast<std::int64_t>(k);
  return -1;
}

WhitneyDecomposition whitney(const RasterOpenSet& omega) {
  WhitneyDecomposition w;
  w.omega = omega;
  if (omega.empty()) return w;
  int top = 0;
  while ((std::int64_t{1} << top) < std::max(omega.nx(), omega.ny())) ++top;

  auto admissible = [&](const WhitneySquare& q) {
    auto c = w.dilate_cells(q, w.contain_factor);
    return omega.all_set(c[0], c[1], c[2], c[3]);
  };
  auto make = [&](int level, std::int64_t i, std::int64_t j) {
    const double side = omega.rho() * std::ldexp(1.0, level);
    return WhitneySquare{level, i, j,
                         Square{omega.origin() + Point(static_cast<double>(i) * side, static_cast<double>(j) * side),
                                side}};
  };
  // Depth-first quadtree from the square covering the grid; a square is
  // emitted when admissible, refined when it is not and still meets Omega.
  std::vector<WhitneySquare> stack{make(top, 0, 0)};
  while (!stack.empty()) {
    WhitneySquare q = stack.back();
    stack.pop_back();
    const std::int64_t s = std::int64_t{1} << q.level;
    if (omega.count_in(q.i * s, (q.i + 1) * s, q.j * s, (q.j + 1) * s) == 0) continue;
    if (admissible(q)) {
      w.squares.push_back(q);
      continue;
    }
    if (q.level == 0) continue;
    for (int c = 3; c >= 0; --c) stack.push_back(make(q.level - 1, 2 * q.i + (c & 1), 2 * q.j + (c >> 1)));
  }
  std::size_t covered = 0;
  for (const auto& q : w.squares) covered += std::size_t{1} << (2 * q.level);
  w.uncovered_cells = omega.count() - covered;
  w.overlap = dilate_overlap(w, 10.0);
  return w;
}

int dilate_overlap(const WhitneyDecomposition& w, double lambda) {
  const auto& om = w.omega;
  if (w.squares.empty()) return 0;
  // Cell center c + 1/2 lies in the closed dilate [cx - h, cx + h] iff
  // ceil(cx - h - 1/2) <= c <= floor(cx + h - 1/2); accumulate by differences.
  const std::int64_t nx = om.nx(), ny = om.ny();
  std::vector<std::int64_t> diff(static_cast<std::size_t>((nx + 1) * (ny + 1)), 0);
  auto at = [&](std::int64_t i, std::int64_t j) -> std::int64_t& {
    return diff[static_cast<std::size_t>(i * (ny + 1) + j)];
  };
  for (const auto& q : w.squares) {
    const double s = std::ldexp(1.0, q.level);
    const double cx = (static_cast<double>(q.i) + 0.5) * s, cy = (static_cast<double>(q.j) + 0.5) * s;
    const double h = lambda * s / 2.0;
    std::int64_t i0 = static_cast<std::int64_t>(std::ceil(cx - h - 0.5)), i1 = static_cast<std::int64_t>(std::floor(cx + h - 0.5)) + 1;
    std::int64_t j0 = static_cast<std::int64_t>(std::ceil(cy - h - 0.5)), j1 = static_cast<std::int64_t>(std::floor(cy + h - 0.5)) + 1;
    i0 = std::clamp<std::int64_t>(i0, 0, nx);
    i1 = std::clamp<std::int64_t>(i1, 0, nx);
    j0 = std::clamp<std::int64_t>(j0, 0, ny);
    j1 = std::clamp<std::int64_t>(j1, 0, ny);
    if (i0 >= i1 || j0 >= j1) continue;
    at(i0, j0) += 1;
    at(i1, j0) -= 1;
    at(i0, j1) -= 1;
    at(i1, j1) += 1;
  }
  std::int64_t best = 0;
  std::vector<std::int64_t> col(static_cast<std::size_t>(ny + 1), 0);
  for (std::int64_t i = 0; i < nx; ++i) {
    std::int64_t run = 0;
    for (std::int64_t j = 0; j < ny; ++j) {
      run += at(i, j);
      col[static_cast<std::size_t>(j)] += run;
      best = std::max(best, col[static_cast<std::size_t>(j)]);
    }
  }
  return static_cast<int>(best);
}

std::vector<std::size_t> select_F(const WhitneyDecomposition& w, const AtomicMeasure& e) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < w.squares.size(); ++k) {
    Square two = w.squares[k].geom.dilate(2.0);
    for (const auto& p : e.positions())
      if (two.contains_closed(p)) {
        out.push_back(k);
        break;
      }
  }
  return out;
}

}  // namespace curvcap
