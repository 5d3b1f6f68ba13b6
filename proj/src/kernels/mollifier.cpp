#include "curvcap/kernels/mollifier.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace curvcap {

double MollifierProfile::psi(double rho) {
  if (rho >= 1.0) return 0.0;
  double t = 1.0 - rho * rho;
  return 3.0 / std::numbers::pi * t * t;
}

double MollifierProfile::psi_derivative(double rho) {
  if (rho >= 1.0) return 0.0;
  return -12.0 / std::numbers::pi * rho * (1.0 - rho * rho);
}

MollifierProfile::MollifierProfile(std::size_t table_size) {
  if (table_size < 8) throw std::invalid_argument("mollifier table too small");
  step_ = 1.0 / static_cast<double>(table_size);
  table_.assign(table_size + 1, 0.0);
  const double g = std::sqrt(3.0 / 5.0);
  const double nodes[3] = {-g, 0.0, g};
  const double weights[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  double acc = 0.0;
  for (std::size_t k = 0; k < table_size; ++k) {
    double a = static_cast<double>(k) * step_;
    double mid = a + step_ / 2, half = step_ / 2;
    double s = 0.0;
    for (int q = 0; q < 3; ++q) {
      double rho = mid + half * nodes[q];
      s += weights[q] * psi(rho) * rho;
    }
    acc += 2.0 * std::numbers::pi * half * s;
    table_[k + 1] = acc;
  }
}

double MollifierProfile::radial_mass(double s) const {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return table_.back();
  double u = s / step_;
  auto k = static_cast<std::size_t>(u);
  if (k >= table_.size() - 1) k = table_.size() - 2;
  double t = u - static_cast<double>(k);
  double a = static_cast<double>(k) * step_, b = a + step_;
  double f0 = table_[k], f1 = table_[k + 1];
  double d0 = 2.0 * std::numbers::pi * psi(a) * a * step_;
  double d1 = 2.0 * std::numbers::pi * psi(b) * b * step_;
  double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * f1 +
         (t3 - t2) * d1;
}

Complex MollifierProfile::kernel(const Complex& z, double eps) const {
  double r2 = std::norm(z);
  if (r2 == 0.0) return {0.0, 0.0};
  Complex inv = std::conj(z) / r2;
  if (r2 > eps * eps) return inv;
  return inv * radial_mass(std::sqrt(r2) / eps);
}

const MollifierProfile& default_mollifier() {
  static const MollifierProfile profile;
  return profile;
}

}  // namespace curvcap
