#include "curvcap/tb/suppressed.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "curvcap/kernels/cauchy.hpp"
#include "curvcap/kernels/menger.hpp"
#include "curvcap/util/parallel.hpp"
#include "curvcap/util/rng.hpp"

namespace curvcap {

namespace {

Complex kernel_of_difference(const Complex& d, double tx, double ty) {
  double den = std::norm(d) + tx * ty;
  if (!(den > 0.0)) throw std::invalid_argument("kernel singularity");
  return damped_kernel(d, tx, ty);
}

}  // namespace

Complex suppressed_kernel(const Point& x, const Point& y, double tx, double ty) {
  if (!(tx >= 0.0) || !(ty >= 0.0)) throw std::invalid_argument("suppression values must be >= 0");
  return kernel_of_difference(x - y, tx, ty);
}

Complex suppressed_kernel(const Point& x, const Point& y, const SuppressionProfile& theta) {
  return suppressed_kernel(x, y, theta(x), theta(y));
}

Complex suppressed_cauchy(const ComplexAtomicMeasure& nu, const Point& x, double eps,
                          const SuppressionProfile& theta) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument("epsilon must be finite and >= 0");
  const double tx = theta(x);
  std::vector<double> re, im;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    Complex d = nu.position(i) - x;
    if (!separated(std::norm(d), eps)) continue;
    Complex t = nu.weight(i) * kernel_of_difference(d, tx, theta(nu.position(i)));
    re.push_back(t.real());
    im.push_back(t.imag());
  }
  return {pairwise_sum(re), pairwise_sum(im)};
}

double suppressed_maximal(const ComplexAtomicMeasure& nu, const Point& x, const SuppressionProfile& theta) {
  const double tx = theta(x);
  std::vector<std::pair<double, std::size_t>> d;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    double r2 = dist2(nu.position(i), x);
    if (r2 > 0.0) d.emplace_back(r2, i);
  }
  std::sort(d.begin(), d.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  });
  double best = 0.0;
  Complex running(0.0, 0.0);
  for (std::size_t k = 0; k < d.size();) {
    std::size_t e = k;
    for (; e < d.size() && d[e].first == d[k].first; ++e) {
      const Point& y = nu.position(d[e].second);
      running += nu.weight(d[e].second) * kernel_of_difference(y - x, tx, theta(y));
    }
    best = std::max(best, std::abs(running));
    k = e;
  }
  return best;
}

NormProbe operator_norm_probe(const AtomicMeasure& mu, const SuppressionProfile& theta, int iterations,
                              std::uint64_t seed, const VectorMap& right, const VectorMap& left) {
  const std::size_t n = mu.size();
  NormProbe out;
  if (n < 2) return out;
  if (iterations < 1) throw std::invalid_argument("power iteration needs at least one step");
  std::vector<double> th(n), sw(n);
  for (std::size_t i = 0; i < n; ++i) {
    th[i] = theta(mu.position(i));
    sw[i] = std::sqrt(mu.weight(i));
  }
  // k[i][j]: contribution of a unit mass at x_j to the transform at x_i.
  std::vector<Complex> k(n * n, Complex(0, 0));
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) k[i * n + j] = kernel_of_difference(mu.position(j) - mu.position(i), th[i], th[j]);
  });
  auto transform = [&](const std::vector<Complex>& phi) {
    std::vector<Complex> out_v(n);
    parallel_for(n, [&](std::size_t i) {
      Complex s(0, 0);
      for (std::size_t j = 0; j < n; ++j) s += k[i * n + j] * (phi[j] * mu.weight(j));
      out_v[i] = s;
    });
    return out_v;
  };
  // Matrix of the composed map in the orthonormal coordinates u = sqrt(w) phi.
  std::vector<Complex> m(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Complex> phi(n, Complex(0, 0));
    phi[j] = 1.0 / sw[j];
    if (right) phi = right(phi);
    std::vector<Complex> psi = transform(phi);
    if (left) psi = left(psi);
    for (std::size_t i = 0; i < n; ++i) m[i * n + j] = sw[i] * psi[i];
  }
  DrawStream rng(seed, 0, 7);
  std::vector<Complex> v(n);
  for (auto& z : v) z = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    double nv = 0.0;
    for (const auto& z : v) nv += std::norm(z);
    nv = std::sqrt(nv);
    if (!(nv > 0.0)) break;
    for (auto& z : v) z /= nv;
    std::vector<Complex> a(n, Complex(0, 0)), b(n, Complex(0, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a[i] += m[i * n + j] * v[j];
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) b[j] += std::conj(m[i * n + j]) * a[i];
    double na = 0.0;
    for (const auto& z : a) na += std::norm(z);
    lambda = std::sqrt(na);
    v = std::move(b);
    out.iterations = it + 1;
  }
  out.estimate = lambda;
  return out;
}

}  // namespace curvcap
