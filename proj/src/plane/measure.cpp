#include "curvcap/plane/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "curvcap/util/parallel.hpp"

namespace curvcap {

namespace {

void check_point(const Point& p) {
  if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
    throw std::invalid_argument("atom position is not finite");
}

void check_resolution(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("resolution must be positive");
}

template <class W>
void canonicalize(std::vector<Point>& pos, std::vector<W>& w) {
  std::vector<std::size_t> order(pos.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lex_less(pos[a], pos[b]); });
  std::vector<Point> p2;
  std::vector<W> w2;
  p2.reserve(pos.size());
  w2.reserve(pos.size());
  for (std::size_t k : order) {
    if (!p2.empty() && p2.back() == pos[k]) {
      w2.back() += w[k];
    } else {
      p2.push_back(pos[k]);
      w2.push_back(w[k]);
    }
  }
  pos = std::move(p2);
  w = std::move(w2);
}

}  // namespace

AtomicMeasure::AtomicMeasure(std::vector<Point> positions, std::vector<double> weights,
                             double resolution)
    : pos_(std::move(positions)), w_(std::move(weights)), resolution_(resolution) {
  if (pos_.size() != w_.size()) throw std::invalid_argument("positions and weights differ in length");
  check_resolution(resolution_);
  for (std::size_t i = 0; i < pos_.size(); ++i) {
    check_point(pos_[i]);
    if (!(w_[i] >= 0.0) || !std::isfinite(w_[i]))
      throw std::invalid_argument("atom weight must be finite and nonnegative");
  }
  canonicalize(pos_, w_);
}

double AtomicMeasure::mass() const { return pairwise_sum(w_); }

AtomicMeasure AtomicMeasure::with_weights(std::vector<double> weights) const {
  if (weights.size() != w_.size()) throw std::invalid_argument("weight vector has wrong length");
  for (double v : weights)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("atom weight must be finite and nonnegative");
  AtomicMeasure out;
  out.pos_ = pos_;
  out.w_ = std::move(weights);
  out.resolution_ = resolution_;
  return out;
}

AtomicMeasure AtomicMeasure::scaled(double t) const {
  std::vector<double> w(w_);
  for (double& v : w) v *= t;
  return with_weights(std::move(w));
}

AtomicMeasure AtomicMeasure::dilated(double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("dilation factor must be positive");
  std::vector<Point> p(pos_);
  std::vector<double> w(w_);
  for (auto& x : p) x *= t;
  for (auto& v : w) v *= t;
  return AtomicMeasure(std::move(p), std::move(w), resolution_ * t);
}

AtomicMeasure AtomicMeasure::transformed(const Complex& rotation, const Point& shift) const {
  std::vector<Point> p(pos_);
  for (auto& x : p) x = rotation * x + shift;
  return AtomicMeasure(std::move(p), w_, resolution_);
}

AtomicMeasure AtomicMeasure::restricted(const std::vector<std::size_t>& keep) const {
  std::vector<Point> p;
  std::vector<double> w;
  for (std::size_t k : keep) {
    p.push_back(pos_.at(k));
    w.push_back(w_.at(k));
  }
  return AtomicMeasure(std::move(p), std::move(w), resolution_);
}

AtomicMeasure AtomicMeasure::merged(const AtomicMeasure& other) const {
  std::vector<Point> p(pos_);
  std::vector<double> w(w_);
  p.insert(p.end(), other.pos_.begin(), other.pos_.end());
  w.insert(w.end(), other.w_.begin(), other.w_.end());
  return AtomicMeasure(std::move(p), std::move(w), std::min(resolution_, other.resolution_));
}

ComplexAtomicMeasure::ComplexAtomicMeasure(std::vector<Point> positions,
                                           std::vector<Complex> weights, double resolution)
    : pos_(std::move(positions)), w_(std::move(weights)), resolution_(resolution) {
  if (pos_.size() != w_.size()) throw std::invalid_argument("positions and weights differ in length");
  check_resolution(resolution_);
  for (std::size_t i = 0; i < pos_.size(); ++i) {
    check_point(pos_[i]);
    if (!std::isfinite(w_[i].real()) || !std::isfinite(w_[i].imag()))
      throw std::invalid_argument("atom weight is not finite");
  }
  canonicalize(pos_, w_);
}

ComplexAtomicMeasure ComplexAtomicMeasure::from_positive(const AtomicMeasure& m) {
  std::vector<Complex> w(m.weights().begin(), m.weights().end());
  return ComplexAtomicMeasure({m.positions().begin(), m.positions().end()}, std::move(w),
                              m.resolution());
}

Complex ComplexAtomicMeasure::total() const {
  std::vector<double> re(w_.size()), im(w_.size());
  for (std::size_t i = 0; i < w_.size(); ++i) {
    re[i] = w_[i].real();
    im[i] = w_[i].imag();
  }
  return {pairwise_sum(re), pairwise_sum(im)};
}

AtomicMeasure ComplexAtomicMeasure::variation() const {
  std::vector<double> w(w_.size());
  for (std::size_t i = 0; i < w_.size(); ++i) w[i] = std::abs(w_[i]);
  return AtomicMeasure(pos_, std::move(w), resolution_);
}

bool in_closed_ball(const Point& center, double radius, const Point& p) {
  double r = radius * (1.0 + kBallSlack);
  return dist2(center, p) <= r * r;
}

double ball_mass(const AtomicMeasure& m, const Ball& b) {
  if (!(b.radius >= 0.0)) throw std::invalid_argument("ball radius must be nonnegative");
  std::vector<double> inside;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (in_closed_ball(b.center, b.radius, m.position(i))) inside.push_back(m.weight(i));
  return pairwise_sum(inside);
}

double square_mass(const AtomicMeasure& m, const Square& q) {
  std::vector<double> inside;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (q.contains_half_open(m.position(i))) inside.push_back(m.weight(i));
  return pairwise_sum(inside);
}

}  // namespace curvcap
