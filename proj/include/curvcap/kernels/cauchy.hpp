#pragma once

#include <cmath>
#include <vector>

#include "curvcap/kernels/mollifier.hpp"
#include "curvcap/plane/measure.hpp"

namespace curvcap {

// conj(d) / (|d|^2 + tx ty) with both components rounded toward zero and the
// denominator rounded up, so |value| never exceeds the exact quotient and the
// bounds 1/|d| and 1/max(tx, ty) hold without rounding slack. Exact inputs
// give exact outputs. Caller guarantees a positive denominator.
inline Complex damped_kernel(const Complex& d, double tx, double ty) {
  const double x = d.real(), y = d.imag();
  const double a = x * x, b = y * y, c = tx * ty;
  const double ea = std::fma(x, x, -a), eb = std::fma(y, y, -b), ec = std::fma(tx, ty, -c);
  const double s1 = a + b, bb1 = s1 - a, e1 = (a - (s1 - bb1)) + (b - bb1);
  const double s2 = s1 + c, bb2 = s2 - s1, e2 = (s1 - (s2 - bb2)) + (c - bb2);
  const double r = ((ea + eb) + ec) + (e1 + e2);
  double den = s2 + r;
  if (r - (den - s2) > 0.0) den = std::nextafter(den, INFINITY);
  auto toward_zero = [den](double n) {
    double q = n / den;
    double res = std::fma(-q, den, n);
    if ((n > 0.0 && res < 0.0) || (n < 0.0 && res > 0.0)) q = std::nextafter(q, 0.0);
    return q;
  };
  return {toward_zero(x), toward_zero(-y)};
}

// 1/d; the suppressed kernel with zero suppression reproduces it bit for bit.
inline Complex cauchy_kernel(const Complex& d) { return damped_kernel(d, 0.0, 0.0); }

// sum of w / (xi - z) over atoms with |xi - z| > eps.
Complex cauchy_truncated(const ComplexAtomicMeasure& nu, const Point& z, double eps);
Complex cauchy_truncated(const AtomicMeasure& mu, const Point& z, double eps);

// sum of w r_eps(xi - z) with the mollified kernel.
Complex cauchy_regularized(const ComplexAtomicMeasure& nu, const Point& z, double eps,
                           const MollifierProfile& profile = default_mollifier());

// Values of C_eps nu(z) on the intervals between consecutive distinct atom
// distances D_1 > D_2 > ... > D_K > 0: entry k holds the transform with the
// atoms at distances >= D_k included, valid for eps in [D_{k+1}, D_k).
struct CauchyBreakpoints {
  std::vector<double> distance;  // D_k
  std::vector<Complex> value;
};
CauchyBreakpoints cauchy_breakpoints(const ComplexAtomicMeasure& nu, const Point& z);

struct CauchyMaximal {
  double value = 0.0;
  double epsilon = 0.0;  // a truncation attaining the maximum (0 when the maximum is 0)
};

// sup over eps > 0 of |C_eps nu(z)|, exact over the breakpoints.
CauchyMaximal cauchy_maximal_detail(const ComplexAtomicMeasure& nu, const Point& z);
double cauchy_maximal(const ComplexAtomicMeasure& nu, const Point& z);

}  // namespace curvcap
