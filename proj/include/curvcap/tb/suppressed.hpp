#pragma once

#include <functional>
#include <vector>

#include "curvcap/plane/measure.hpp"
#include "curvcap/tb/suppression.hpp"

namespace curvcap {

// conj(x - y) / (|x - y|^2 + tx ty). Throws when x == y and tx ty == 0.
Complex suppressed_kernel(const Point& x, const Point& y, double tx, double ty);
Complex suppressed_kernel(const Point& x, const Point& y, const SuppressionProfile& theta);

// sum over atoms with |xi - x| > eps of w conj(xi - x) / (|xi - x|^2 + Theta(x) Theta(xi));
// the sign matches cauchy_truncated, and Theta == 0 reproduces it exactly.
Complex suppressed_cauchy(const ComplexAtomicMeasure& nu, const Point& x, double eps,
                          const SuppressionProfile& theta);

// sup over eps > 0 of |suppressed_cauchy|, exact over the atom distances.
double suppressed_maximal(const ComplexAtomicMeasure& nu, const Point& x, const SuppressionProfile& theta);

// Largest singular value of phi -> C_Theta(phi mu) on L^2(mu), estimated by
// power iteration on the atom matrix (diagonal excluded). Optional left and
// right maps (e.g. projections onto good functions) are applied around it.
struct NormProbe {
  double estimate = 0.0;
  int iterations = 0;
};
using VectorMap = std::function<std::vector<Complex>(const std::vector<Complex>&)>;
NormProbe operator_norm_probe(const AtomicMeasure& mu, const SuppressionProfile& theta, int iterations,
                              std::uint64_t seed, const VectorMap& right = {}, const VectorMap& left = {});

}  // namespace curvcap
