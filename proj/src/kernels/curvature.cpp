#include "curvcap/kernels/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "curvcap/kernels/menger.hpp"
#include "curvcap/util/parallel.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define CURVCAP_SIMD_ROW 1
#endif

namespace curvcap {

namespace {

struct RowInput {
  const double* d2;  // |x_k - x_i|^2
  const double* dx;  // x_k - x_i
  const double* dy;
  const double* X;
  const double* Y;
  const double* L;  // max(|x_k|, |y_k|)
  double a2, ux, uy, xj, yj, lij, e2, tol2;
};

// Same operation sequence as menger_c2_ordered, so every lane rounds the same
// way as the scalar formula.
inline double curv_one(const RowInput& in, std::size_t k) {
  const double b2 = in.d2[k];
  const double wx = in.X[k] - in.xj, wy = in.Y[k] - in.yj;
  const double c2 = wx * wx + wy * wy;
  const double cross = diff_of_products(in.ux, in.dy[k], in.uy, in.dx[k]);
  const double m1 = in.a2 > b2 ? in.a2 : b2;
  const double side2 = m1 > c2 ? m1 : c2;
  const double lmax = in.lij > in.L[k] ? in.lij : in.L[k];
  const double l2 = lmax * lmax;
  const double scale2 = l2 > side2 ? l2 : side2;
  const double cross2 = cross * cross;
  if (!(b2 > in.e2) || !(c2 > in.e2) || !(cross2 > in.tol2 * side2 * scale2)) return 0.0;
  return 4.0 * cross2 / (in.a2 * b2 * c2);
}

void curv_row(const RowInput& in, std::size_t begin, std::size_t end, double* out) {
  std::size_t k = begin;
#ifdef CURVCAP_SIMD_ROW
  const __m256d a2 = _mm256_set1_pd(in.a2), ux = _mm256_set1_pd(in.ux), uy = _mm256_set1_pd(in.uy);
  const __m256d xj = _mm256_set1_pd(in.xj), yj = _mm256_set1_pd(in.yj), lij = _mm256_set1_pd(in.lij);
  const __m256d e2 = _mm256_set1_pd(in.e2), tol2 = _mm256_set1_pd(in.tol2), four = _mm256_set1_pd(4.0);
  for (; k + 4 <= end; k += 4) {
    const __m256d b2 = _mm256_loadu_pd(in.d2 + k);
    const __m256d dx = _mm256_loadu_pd(in.dx + k), dy = _mm256_loadu_pd(in.dy + k);
    const __m256d wx = _mm256_sub_pd(_mm256_loadu_pd(in.X + k), xj);
    const __m256d wy = _mm256_sub_pd(_mm256_loadu_pd(in.Y + k), yj);
    const __m256d c2 = _mm256_add_pd(_mm256_mul_pd(wx, wx), _mm256_mul_pd(wy, wy));
    const __m256d cd = _mm256_mul_pd(uy, dx);
    const __m256d err = _mm256_fnmadd_pd(uy, dx, cd);
    const __m256d dop = _mm256_fmsub_pd(ux, dy, cd);
    const __m256d cross = _mm256_add_pd(dop, err);
    // max_pd(a, b) is a > b ? a : b, matching the scalar ternaries.
    const __m256d side2 = _mm256_max_pd(_mm256_max_pd(a2, b2), c2);
    const __m256d lmax = _mm256_max_pd(lij, _mm256_loadu_pd(in.L + k));
    const __m256d scale2 = _mm256_max_pd(_mm256_mul_pd(lmax, lmax), side2);
    const __m256d cross2 = _mm256_mul_pd(cross, cross);
    const __m256d keep = _mm256_and_pd(
        _mm256_and_pd(_mm256_cmp_pd(b2, e2, _CMP_GT_OQ), _mm256_cmp_pd(c2, e2, _CMP_GT_OQ)),
        _mm256_cmp_pd(cross2, _mm256_mul_pd(_mm256_mul_pd(tol2, side2), scale2), _CMP_GT_OQ));
    const __m256d value =
        _mm256_div_pd(_mm256_mul_pd(four, cross2), _mm256_mul_pd(_mm256_mul_pd(a2, b2), c2));
    _mm256_storeu_pd(out + k, _mm256_and_pd(keep, value));
  }
#endif
  for (; k < end; ++k) out[k] = curv_one(in, k);
}

double resolve_eps(const AtomicMeasure& m, std::optional<double> epsilon) {
  double eps = epsilon.value_or(m.resolution());
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument("epsilon must be finite and >= 0");
  return eps;
}

}  // namespace

CurvatureEngine::CurvatureEngine(std::span<const Point> positions, double epsilon)
    : pos_(positions.begin(), positions.end()), eps_(epsilon) {
  if (!(eps_ >= 0.0) || !std::isfinite(eps_)) throw std::invalid_argument("epsilon must be finite and >= 0");
  if (!std::is_sorted(pos_.begin(), pos_.end(), lex_less))
    throw std::invalid_argument("positions must be in lexicographic order");
}

std::vector<double> CurvatureEngine::potentials(std::span<const double> w) const {
  const std::size_t n = pos_.size();
  if (w.size() != n) throw std::invalid_argument("weight vector has wrong length");
  std::vector<double> out(n, 0.0);
  if (n < 3) return out;

  std::vector<double> X(n), Y(n), L(n);
  for (std::size_t i = 0; i < n; ++i) {
    X[i] = pos_[i].real();
    Y[i] = pos_[i].imag();
    L[i] = std::fmax(std::fabs(X[i]), std::fabs(Y[i]));
  }
  const double tol2 = kCollinearTol * kCollinearTol;

  // Fixed partition of the outer index; each task owns a private accumulator.
  const std::size_t n_tasks = std::min<std::size_t>(n, 64);
  const std::size_t block = (n + n_tasks - 1) / n_tasks;
  std::vector<std::vector<double>> acc(n_tasks);

  const double e = eps_ * (1.0 + kSeparationSlack);
  const double e2 = e * e;
  parallel_for(n_tasks, [&](std::size_t t) {
    std::vector<double>& a = acc[t];
    a.assign(n, 0.0);
    std::vector<double> dx(n), dy(n), d2(n), curv(n);
    const std::size_t i_begin = t * block, i_end = std::min(n, i_begin + block);
    for (std::size_t i = i_begin; i < i_end; ++i) {
      const double xi = X[i], yi = Y[i], wi = w[i];
      for (std::size_t k = i + 1; k < n; ++k) {
        dx[k] = X[k] - xi;
        dy[k] = Y[k] - yi;
        d2[k] = dx[k] * dx[k] + dy[k] * dy[k];
      }
      double acc_i = 0.0;
      for (std::size_t j = i + 1; j + 1 < n; ++j) {
        const double a2 = d2[j];
        if (!(a2 > e2)) continue;
        const RowInput in{d2.data(), dx.data(), dy.data(), X.data(), Y.data(), L.data(),
                          a2, dx[j], dy[j], X[j], Y[j], L[i] > L[j] ? L[i] : L[j], e2, tol2};
        curv_row(in, j + 1, n, curv.data());
        const double wj = w[j], wij = wi * wj;
        for (std::size_t k = j + 1; k < n; ++k) a[k] += curv[k] * wij;
        // Four interleaved partial sums, combined in a fixed order.
        double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
        std::size_t k = j + 1;
        for (; k + 3 < n; k += 4) {
          s0 += curv[k] * w[k];
          s1 += curv[k + 1] * w[k + 1];
          s2 += curv[k + 2] * w[k + 2];
          s3 += curv[k + 3] * w[k + 3];
        }
        for (; k < n; ++k) s0 += curv[k] * w[k];
        const double sum = (s0 + s1) + (s2 + s3);
        acc_i += wj * sum;
        a[j] += wi * sum;
      }
      a[i] += acc_i;
    }
  });

  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t t = 0; t < n_tasks; ++t) s += acc[t][i];
    out[i] = 2.0 * s;
  }
  return out;
}

double weighted_total(std::span<const double> a, std::span<const double> p) {
  if (a.size() != p.size()) throw std::invalid_argument("length mismatch");
  std::vector<double> terms(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) terms[i] = a[i] * p[i];
  return pairwise_sum(terms);
}

CurvatureReport curvature_total(const AtomicMeasure& m, std::optional<double> epsilon) {
  CurvatureReport r;
  r.epsilon = resolve_eps(m, epsilon);
  CurvatureEngine engine(m.positions(), r.epsilon);
  r.per_atom = engine.potentials(m.weights());
  r.total = weighted_total(m.weights(), r.per_atom);
  return r;
}

double curvature_potential(const AtomicMeasure& m, const Point& x, std::optional<double> epsilon) {
  double eps = resolve_eps(m, epsilon);
  const std::size_t n = m.size();
  std::vector<double> rows(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const Point& y = m.position(j);
    if (!separated(dist2(x, y), eps)) continue;
    double s = 0.0;
    for (std::size_t k = j + 1; k < n; ++k) {
      const Point& z = m.position(k);
      if (!separated(dist2(x, z), eps) || !separated(dist2(y, z), eps)) continue;
      s += menger_c2(x, y, z) * m.weight(k);
    }
    rows[j] = 2.0 * s * m.weight(j);
  }
  return pairwise_sum(rows);
}

}  // namespace curvcap
