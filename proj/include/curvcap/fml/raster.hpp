#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "curvcap/plane/measure.hpp"

namespace curvcap {

// Union of half-open cells origin + rho [i, i+1) x [j, j+1), 0 <= i < nx,
// 0 <= j < ny. Everything outside the grid is outside the set.
class RasterOpenSet {
 public:
  RasterOpenSet() = default;
  RasterOpenSet(Point origin, double rho, int nx, int ny, std::vector<char> bits);

  Point origin() const { return origin_; }
  double rho() const { return rho_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  bool empty() const { return count_ == 0; }
  std::size_t count() const { return count_; }

  bool cell(std::int64_t i, std::int64_t j) const;
  Point cell_center(std::int64_t i, std::int64_t j) const;
  // Cell index containing p (may lie outside the grid).
  std::pair<std::int64_t, std::int64_t> cell_of(const Point& p) const;
  bool contains(const Point& p) const;
  // Number of set cells in [i0, i1) x [j0, j1); cells outside the grid count as unset.
  std::int64_t count_in(std::int64_t i0, std::int64_t i1, std::int64_t j0, std::int64_t j1) const;
  bool all_set(std::int64_t i0, std::int64_t i1, std::int64_t j0, std::int64_t j1) const;

 private:
  Point origin_;
  double rho_ = 1.0;
  int nx_ = 0;
  int ny_ = 0;
  std::vector<char> bits_;
  std::vector<std::int64_t> prefix_;  // (nx+1) x (ny+1) summed-area table
  std::size_t count_ = 0;
};

// Cells whose center has U_sigma > lambda. The grid spans the support box
// padded by 3 mass / lambda plus a margin, beyond which U_sigma <= lambda.
RasterOpenSet level_set_omega(const AtomicMeasure& sigma, double lambda, double rho);

// Same construction for an arbitrary field whose superlevel set lies in `box`
// (corner and side lengths); used for tests and rasterized reference shapes.
RasterOpenSet rasterize(const std::function<bool(const Point&)>& inside, Point lo, Point hi, double rho);

}  // namespace curvcap
