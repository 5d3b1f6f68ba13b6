#pragma once

#include <span>
#include <vector>

#include "curvcap/plane/geometry.hpp"

namespace curvcap {

// Relative slack applied to closed-ball membership so that dilations and
// translations do not flip boundary ties created by rounding.
inline constexpr double kBallSlack = 1e-12;

// Finite positive measure: distinct atoms stored in lexicographic order of
// position. Duplicate positions are merged by summing weights.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;
  AtomicMeasure(std::vector<Point> positions, std::vector<double> weights, double resolution);

  std::size_t size() const { return pos_.size(); }
  bool empty() const { return pos_.empty(); }
  const Point& position(std::size_t i) const { return pos_[i]; }
  double weight(std::size_t i) const { return w_[i]; }
  std::span<const Point> positions() const { return pos_; }
  std::span<const double> weights() const { return w_; }
  double resolution() const { return resolution_; }
  double mass() const;

  // Same support, new weights (same order, nonnegative).
  AtomicMeasure with_weights(std::vector<double> weights) const;
  AtomicMeasure scaled(double t) const;
  // Push-forward under x -> t x, with weights and resolution multiplied by t.
  AtomicMeasure dilated(double t) const;
  AtomicMeasure transformed(const Complex& rotation, const Point& shift) const;
  AtomicMeasure restricted(const std::vector<std::size_t>& keep) const;
  AtomicMeasure merged(const AtomicMeasure& other) const;

 private:
  std::vector<Point> pos_;
  std::vector<double> w_;
  double resolution_ = 1.0;
};

// Finite complex measure with the same storage rules.
class ComplexAtomicMeasure {
 public:
  ComplexAtomicMeasure() = default;
  ComplexAtomicMeasure(std::vector<Point> positions, std::vector<Complex> weights,
                       double resolution);
  static ComplexAtomicMeasure from_positive(const AtomicMeasure& m);

  std::size_t size() const { return pos_.size(); }
  bool empty() const { return pos_.empty(); }
  const Point& position(std::size_t i) const { return pos_[i]; }
  const Complex& weight(std::size_t i) const { return w_[i]; }
  std::span<const Point> positions() const { return pos_; }
  std::span<const Complex> weights() const { return w_; }
  double resolution() const { return resolution_; }
  Complex total() const;
  AtomicMeasure variation() const;

 private:
  std::vector<Point> pos_;
  std::vector<Complex> w_;
  double resolution_ = 1.0;
};

bool in_closed_ball(const Point& center, double radius, const Point& p);
double ball_mass(const AtomicMeasure& m, const Ball& b);
double square_mass(const AtomicMeasure& m, const Square& q);

}  // namespace curvcap
