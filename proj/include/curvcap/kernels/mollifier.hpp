#pragma once

#include <vector>

#include "curvcap/plane/geometry.hpp"

namespace curvcap {

// Radial profile psi(x) = (3/pi)(1 - |x|^2)^2 on the unit disc, with a table
// of its radial mass Psi(s) = integral of psi over B(0, s) built by
// Gauss-Legendre quadrature and read back by cubic Hermite interpolation.
class MollifierProfile {
 public:
  explicit MollifierProfile(std::size_t table_size = 4096);

  static double psi(double rho);
  static double psi_derivative(double rho);
  double radial_mass(double s) const;
  double total_mass() const { return radial_mass(1.0); }

  // r_eps(z) = (psi_eps * 1/z)(z). Inside the disc only the inner mass
  // contributes (mean value property), outside it is exactly 1/z.
  Complex kernel(const Complex& z, double eps) const;

 private:
  std::vector<double> table_;
  double step_;
};

const MollifierProfile& default_mollifier();

}  // namespace curvcap
