#pragma once

// Independent reference computations used only by tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using P = std::complex<double>;

// Circumradius from side lengths and Kahan's stable Heron formula.
inline double heron_area(double a, double b, double c) {
  std::array<double, 3> s{a, b, c};
  std::sort(s.begin(), s.end(), std::greater<>());
  double x = s[0], y = s[1], z = s[2];
  double t = (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z));
  return t <= 0 ? 0.0 : 0.25 * std::sqrt(t);
}

inline double curvature(P x, P y, P z) {
  double a = std::abs(x - y), b = std::abs(y - z), c = std::abs(x - z);
  if (a == 0 || b == 0 || c == 0) return 0.0;
  double area = heron_area(a, b, c);
  return 4.0 * area / (a * b * c);
}

// Ordered-triple brute force of the truncated curvature of a measure.
inline double curvature_total(const std::vector<P>& x, const std::vector<double>& w, double eps) {
  double s = 0.0;
  std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        if (std::abs(x[i] - x[j]) <= eps || std::abs(x[j] - x[k]) <= eps || std::abs(x[i] - x[k]) <= eps)
          continue;
        double c = curvature(x[i], x[j], x[k]);
        s += c * c * w[i] * w[j] * w[k];
      }
  return s;
}

inline double potential(const std::vector<P>& x, const std::vector<double>& w, P at, double eps) {
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j)
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (j == k) continue;
      if (std::abs(at - x[j]) <= eps || std::abs(at - x[k]) <= eps || std::abs(x[j] - x[k]) <= eps)
        continue;
      double c = curvature(at, x[j], x[k]);
      s += c * c * w[j] * w[k];
    }
  return s;
}

// Closed form of the radial mass of (3/pi)(1-|x|^2)^2 over B(0, s).
inline double mollifier_mass(double s) {
  if (s >= 1) return 1.0;
  double t = 1 - s * s;
  return 1 - t * t * t;
}

// Maximizer of (tW)^2 / (tW + t^3 K) over a geometric grid of t <= t_max plus
// t_max itself.
inline std::pair<double, double> scaling_grid(double w, double k, double t_max) {
  double best_t = 0, best_v = -1;
  for (int q = -4000; q <= 4001; ++q) {
    double t = q == 4001 ? t_max : std::pow(10.0, q / 1000.0);
    if (t > t_max) continue;
    double v = (t * w) * (t * w) / (t * w + t * t * t * k);
    if (v > best_v) best_v = v, best_t = t;
  }
  return {best_t, best_v};
}

// min(1, min over atoms x_j and radii r = base 2^l up to the diameter of
// r / mu(closed B(x_j, r))), by direct enumeration.
inline double growth_factor(const std::vector<P>& x, const std::vector<double>& w, double base) {
  double diam = 0;
  for (auto& a : x)
    for (auto& b : x) diam = std::max(diam, std::abs(a - b));
  double s = 1.0;
  for (auto& c : x) {
    for (double r = base;; r *= 2) {
      double m = 0;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (std::abs(x[i] - c) <= r * (1 + 1e-12)) m += w[i];
      if (m > 0) s = std::min(s, r / m);
      if (r >= diam) break;
    }
  }
  return s;
}

// Wilson score interval at 95%.
inline std::pair<double, double> wilson(double successes, double n) {
  const double z = 1.959963984540054;
  double p = successes / n;
  double denom = 1 + z * z / n;
  double centre = (p + z * z / (2 * n)) / denom;
  double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
  return {centre - half, centre + half};
}

}  // namespace oracle
