#pragma once

#include <optional>
#include <span>
#include <vector>

#include "curvcap/plane/measure.hpp"

namespace curvcap {

struct CurvatureReport {
  double total = 0.0;
  std::vector<double> per_atom;  // c²_μ(x_i) for each atom, in atom order
  double epsilon = 0.0;
};

// Triple sums over a fixed support. Distances and curvatures are recomputed
// per call; the support and truncation are fixed at construction.
class CurvatureEngine {
 public:
  CurvatureEngine(std::span<const Point> positions, double epsilon);

  // p_i = sum over ordered pairs (j, k) of distinct atoms other than i, with
  // all pairwise distances > epsilon, of c(x_i,x_j,x_k)^2 w_j w_k.
  std::vector<double> potentials(std::span<const double> w) const;
  double epsilon() const { return eps_; }
  std::size_t size() const { return pos_.size(); }

 private:
  std::vector<Point> pos_;
  double eps_;
};

CurvatureReport curvature_total(const AtomicMeasure& m, std::optional<double> epsilon = {});
double curvature_potential(const AtomicMeasure& m, const Point& x, std::optional<double> epsilon = {});

// c^2(a, b, b) style mixed sums: sum_i a_i p_i(b).
double weighted_total(std::span<const double> a, std::span<const double> p);

}  // namespace curvcap
