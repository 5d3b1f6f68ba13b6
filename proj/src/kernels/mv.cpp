#include "curvcap/kernels/mv.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "curvcap/kernels/cauchy.hpp"
#include "curvcap/kernels/curvature.hpp"
#include "curvcap/kernels/maximal.hpp"
#include "curvcap/util/parallel.hpp"

namespace curvcap {

MvReport mv_identity_report(const AtomicMeasure& m, std::optional<double> epsilon) {
  MvReport r;
  r.epsilon = epsilon.value_or(m.resolution());
  if (!(r.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (m.empty()) return r;
  std::vector<double> terms(m.size());
  parallel_for(m.size(), [&](std::size_t i) {
    terms[i] = m.weight(i) * std::norm(cauchy_truncated(m, m.position(i), r.epsilon));
  });
  r.lhs = pairwise_sum(terms);
  r.curvature_term = curvature_total(m, r.epsilon).total / 6.0;
  r.remainder = r.lhs - r.curvature_term;
  r.mass = m.mass();
  r.growth_constant = growth_constant(m);
  r.growth_warning = r.growth_constant > kGrowthWarning;
  return r;
}

}  // namespace curvcap
