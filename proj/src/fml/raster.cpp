#include "curvcap/fml/raster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "curvcap/kernels/curvature.hpp"
#include "curvcap/kernels/maximal.hpp"
#include "curvcap/util/parallel.hpp"

namespace curvcap {

RasterOpenSet::RasterOpenSet(Point origin, double rho, int nx, int ny, std::vector<char> bits)
    : origin_(origin), rho_(rho), nx_(nx), ny_(ny), bits_(std::move(bits)) {
  if (!(rho > 0.0)) throw std::invalid_argument("raster cell size must be positive");
  if (nx < 0 || ny < 0 || bits_.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny))
    throw std::invalid_argument("raster bitmask does not match its dimensions");
  prefix_.assign(static_cast<std::size_t>(nx + 1) * static_cast<std::size_t>(ny + 1), 0);
  auto at = [&](int i, int j) -> std::int64_t& { return prefix_[static_cast<std::size_t>(i) * (ny_ + 1) + j]; };
  for (int i = 0; i < nx_; ++i)
    for (int j = 0; j < ny_; ++j) {
      std::int64_t b = bits_[static_cast<std::size_t>(i) * ny_ + j] ? 1 : 0;
      count_ += static_cast<std::size_t>(b);
      at(i + 1, j + 1) = b + at(i, j + 1) + at(i + 1, j) - at(i, j);
    }
}

bool RasterOpenSet::cell(std::int64_t i, std::int64_t j) const {
  if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return false;
  return bits_[static_cast<std::size_t>(i) * ny_ + static_cast<std::size_t>(j)] != 0;
}

Point RasterOpenSet::cell_center(std::int64_t i, std::int64_t j) const {
  return origin_ + Point((static_cast<double>(i) + 0.5) * rho_, (static_cast<double>(j) + 0.5) * rho_);
}

std::pair<std::int64_t, std::int64_t> RasterOpenSet::cell_of(const Point& p) const {
  return {static_cast<std::int64_t>(std::floor((p.real() - origin_.real()) / rho_)),
          static_cast<std::int64_t>(std::floor((p.imag() - origin_.imag()) / rho_))};
}

bool RasterOpenSet::contains(const Point& p) const {
  auto [i, j] = cell_of(p);
  return cell(i, j);
}

std::int64_t RasterOpenSet::count_in(std::int64_t i0, std::int64_t i1, std::int64_t j0, std::int64_t j1) const {
  i0 = std::clamp<std::int64_t>(i0, 0, nx_);
  i1 = std::clamp<std::int64_t>(i1, 0, nx_);
  j0 = std::clamp<std::int64_t>(j0, 0, ny_);
  j1 = std::clamp<std::int64_t>(j1, 0, ny_);
  if (i0 >= i1 || j0 >= j1) return 0;
  auto at = [&](std::int64_t i, std::int64_t j) { return prefix_[static_cast<std::size_t>(i * (ny_ + 1) + j)]; };
  return at(i1, j1) - at(i0, j1) - at(i1, j0) + at(i0, j0);
}

bool RasterOpenSet::all_set(std::int64_t i0, std::int64_t i1, std::int64_t j0, std::int64_t j1) const {
  if (i0 >= i1 || j0 >= j1) return true;
  if (i0 < 0 || j0 < 0 || i1 > nx_ || j1 > ny_) return false;
  return count_in(i0, i1, j0, j1) == (i1 - i0) * (j1 - j0);
}

RasterOpenSet rasterize(const std::function<bool(const Point&)>& inside, Point lo, Point hi, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("raster cell size must be positive");
  const double wx = hi.real() - lo.real(), wy = hi.imag() - lo.imag();
  if (!(wx >= 0.0 && wy >= 0.0)) throw std::invalid_argument("raster box is inverted");
  const double cells_x = std::ceil(wx / rho), cells_y = std::ceil(wy / rho);
  if (cells_x * cells_y > 1e8) throw std::invalid_argument("raster too large; increase rho");
  const int nx = std::max(1, static_cast<int>(cells_x)), ny = std::max(1, static_cast<int>(cells_y));
  std::vector<char> bits(static_cast<std::size_t>(nx) * ny, 0);
  parallel_for(static_cast<std::size_t>(nx), [&](std::size_t i) {
    for (int j = 0; j < ny; ++j) {
      const Point c = lo + Point((static_cast<double>(i) + 0.5) * rho, (static_cast<double>(j) + 0.5) * rho);
      bits[i * ny + j] = inside(c) ? 1 : 0;
    }
  });
  return RasterOpenSet(lo, rho, nx, ny, std::move(bits));
}

RasterOpenSet level_set_omega(const AtomicMeasure& sigma, double lambda, double rho) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  if (sigma.empty() || !(sigma.mass() > 0.0)) return RasterOpenSet(Point(0, 0), rho, 0, 0, {});
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& p : sigma.positions()) {
    xmin = std::min(xmin, p.real());
    xmax = std::max(xmax, p.real());
    ymin = std::min(ymin, p.imag());
    ymax = std::max(ymax, p.imag());
  }
  // M sigma(x) <= mass / d and c_sigma(x) <= 2 mass / d at distance d from the
  // support, so U_sigma <= lambda beyond 3 mass / lambda.
  const double reach = 3.0 * sigma.mass() / lambda;
  const double pad = reach + 2.0 * rho;
  Point lo(xmin - pad, ymin - pad), hi(xmax + pad, ymax + pad);
  auto inside = [&](const Point& x) {
    double d = INFINITY;
    for (const auto& p : sigma.positions()) d = std::min(d, dist(x, p));
    if (d >= reach) return false;
    double m = maximal_radial(sigma, x);
    if (m > lambda) return true;
    return m + std::sqrt(curvature_potential(sigma, x, 0.0)) > lambda;
  };
  return rasterize(inside, lo, hi, rho);
}

}  // namespace curvcap
