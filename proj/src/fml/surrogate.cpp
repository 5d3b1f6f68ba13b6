#include "curvcap/fml/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "curvcap/kernels/cauchy.hpp"
#include "curvcap/util/parallel.hpp"

namespace curvcap {

namespace {

// Sum over every atom distinct from z.
template <class M>
Complex untruncated(const M& m, const Point& z) {
  return cauchy_truncated(m, z, std::numeric_limits<double>::min());
}

}  // namespace

SurrogateGrid default_surrogate_grid(const SegmentFamily& e) {
  const double d = e.diameter();
  if (!(d > 0.0)) throw std::invalid_argument("segment family has zero diameter");
  return {d / 32.0, d / 64.0, d / 4.0, d / 32.0};
}

Surrogate surrogate_nu0(const SegmentFamily& e) { return surrogate_nu0(e, default_surrogate_grid(e)); }

Surrogate surrogate_nu0(const SegmentFamily& e, const SurrogateGrid& grid) {
  e.validate();
  if (e.segments.empty()) throw std::invalid_argument("segment family is empty");
  if (!(grid.h > 0.0 && grid.spacing > 0.0 && grid.margin >= 0.0 && grid.min_dist > 0.0))
    throw std::invalid_argument("surrogate grid parameters must be positive");
  Surrogate s;
  s.grid = grid;
  s.arclength = discretize_segments(e, grid.h);
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& seg : e.segments)
    for (Point p : {seg.a, seg.b}) {
      xmin = std::min(xmin, p.real());
      xmax = std::max(xmax, p.real());
      ymin = std::min(ymin, p.imag());
      ymax = std::max(ymax, p.imag());
    }
  s.grid_origin = Point(xmin - grid.margin, ymin - grid.margin);
  const auto na = static_cast<std::int64_t>(std::floor((xmax - xmin + 2 * grid.margin) / grid.spacing));
  const auto nb = static_cast<std::int64_t>(std::floor((ymax - ymin + 2 * grid.margin) / grid.spacing));
  for (std::int64_t a = 0; a <= na; ++a)
    for (std::int64_t b = 0; b <= nb; ++b) {
      Point z = s.grid_origin + Point(static_cast<double>(a) * grid.spacing, static_cast<double>(b) * grid.spacing);
      if (e.distance_to(z) >= grid.min_dist) s.grid_points.push_back(z);
    }
  if (s.grid_points.empty()) throw std::invalid_argument("surrogate grid has no off-E points");
  std::vector<double> mod(s.grid_points.size());
  parallel_for(s.grid_points.size(),
               [&](std::size_t k) { mod[k] = std::abs(untruncated(s.arclength, s.grid_points[k])); });
  std::size_t best = 0;
  for (std::size_t k = 1; k < mod.size(); ++k)
    if (mod[k] > mod[best]) best = k;
  s.K = mod[best];
  s.argmax = s.grid_points[best];
  std::vector<Point> pos(s.arclength.positions().begin(), s.arclength.positions().end());
  std::vector<Complex> w;
  for (double v : s.arclength.weights()) w.emplace_back(v / s.K, 0.0);
  s.nu0 = ComplexAtomicMeasure(pos, w, s.arclength.resolution());
  return s;
}

VitushkinBound vitushkin_localize(const Surrogate& s, const BumpFunction& g, const Square& support,
                                  const Square& sample_region, int quad_cells) {
  if (quad_cells < 8) throw std::invalid_argument("quadrature grid needs at least 8 cells across the bump support");
  const double dz = support.side / quad_cells;
  struct Node {
    Point z;
    Complex weight;  // C nu0(z) dbar g(z) dA / pi
  };
  std::vector<Node> nodes;
  for (int a = 0; a < quad_cells; ++a)
    for (int b = 0; b < quad_cells; ++b) {
      Point z = support.corner + Point((a + 0.5) * dz, (b + 0.5) * dz);
      auto [v, grad] = g(z);
      Complex dbar(grad.real() / 2.0, grad.imag() / 2.0);
      if (dbar == Complex(0, 0)) continue;
      nodes.push_back({z, untruncated(s.nu0, z) * dbar * (dz * dz / M_PI)});
    }
  std::vector<Point> xs;
  for (const auto& p : s.grid_points)
    if (sample_region.contains_closed(p)) xs.push_back(p);
  VitushkinBound out;
  out.samples = xs.size();
  std::vector<double> formula(xs.size()), direct(xs.size()), gap(xs.size());
  parallel_for(xs.size(), [&](std::size_t k) {
    const Point xi = xs[k];
    Complex sum = g(xi).first * untruncated(s.nu0, xi);
    for (const auto& n : nodes) {
      Complex d = n.z - xi;
      if (std::norm(d) == 0.0) continue;
      sum += n.weight / d;
    }
    Complex dir(0, 0);
    for (std::size_t i = 0; i < s.nu0.size(); ++i) {
      double gv = g(s.nu0.position(i)).first;
      if (gv != 0.0) dir += gv * s.nu0.weight(i) * cauchy_kernel(s.nu0.position(i) - xi);
    }
    formula[k] = std::abs(sum);
    direct[k] = std::abs(dir);
    gap[k] = std::abs(sum - dir);
  });
  for (std::size_t k = 0; k < xs.size(); ++k) {
    out.max_modulus = std::max(out.max_modulus, formula[k]);
    out.max_direct = std::max(out.max_direct, direct[k]);
    out.max_discrepancy = std::max(out.max_discrepancy, gap[k]);
  }
  return out;
}

}  // namespace curvcap
