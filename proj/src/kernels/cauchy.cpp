#include "curvcap/kernels/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "curvcap/kernels/menger.hpp"
#include "curvcap/util/parallel.hpp"

namespace curvcap {

namespace {

void check_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("epsilon must be positive");
}

Complex sum_complex(const std::vector<double>& re, const std::vector<double>& im) {
  return {pairwise_sum(re), pairwise_sum(im)};
}

}  // namespace

Complex cauchy_truncated(const ComplexAtomicMeasure& nu, const Point& z, double eps) {
  check_eps(eps);
  std::vector<double> re, im;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    Complex d = nu.position(i) - z;
    if (!separated(std::norm(d), eps)) continue;
    Complex t = nu.weight(i) * cauchy_kernel(d);
    re.push_back(t.real());
    im.push_back(t.imag());
  }
  return sum_complex(re, im);
}

Complex cauchy_truncated(const AtomicMeasure& mu, const Point& z, double eps) {
  check_eps(eps);
  std::vector<double> re, im;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    Complex d = mu.position(i) - z;
    if (!separated(std::norm(d), eps)) continue;
    Complex t = mu.weight(i) * cauchy_kernel(d);
    re.push_back(t.real());
    im.push_back(t.imag());
  }
  return sum_complex(re, im);
}

Complex cauchy_regularized(const ComplexAtomicMeasure& nu, const Point& z, double eps,
                           const MollifierProfile& profile) {
  check_eps(eps);
  std::vector<double> re, im;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    Complex t = nu.weight(i) * profile.kernel(nu.position(i) - z, eps);
    re.push_back(t.real());
    im.push_back(t.imag());
  }
  return sum_complex(re, im);
}

CauchyBreakpoints cauchy_breakpoints(const ComplexAtomicMeasure& nu, const Point& z) {
  std::vector<std::pair<double, std::size_t>> d;
  d.reserve(nu.size());
  for (std::size_t i = 0; i < nu.size(); ++i) {
    double r2 = dist2(nu.position(i), z);
    if (r2 > 0.0) d.emplace_back(r2, i);
  }
  std::sort(d.begin(), d.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  });
  CauchyBreakpoints out;
  Complex running(0.0, 0.0);
  for (std::size_t k = 0; k < d.size();) {
    std::size_t e = k;
    while (e < d.size() && d[e].first == d[k].first) {
      running += nu.weight(d[e].second) * cauchy_kernel(nu.position(d[e].second) - z);
      ++e;
    }
    out.distance.push_back(std::sqrt(d[k].first));
    out.value.push_back(running);
    k = e;
  }
  return out;
}

CauchyMaximal cauchy_maximal_detail(const ComplexAtomicMeasure& nu, const Point& z) {
  CauchyBreakpoints bp = cauchy_breakpoints(nu, z);
  CauchyMaximal best;
  for (std::size_t k = 0; k < bp.value.size(); ++k) {
    double v = std::abs(bp.value[k]);
    if (v > best.value) {
      best.value = v;
      best.epsilon = k + 1 < bp.distance.size() ? bp.distance[k + 1] : bp.distance[k] / 2;
    }
  }
  return best;
}

double cauchy_maximal(const ComplexAtomicMeasure& nu, const Point& z) {
  return cauchy_maximal_detail(nu, z).value;
}

}  // namespace curvcap
