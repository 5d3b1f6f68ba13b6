#include "curvcap/tb/suppression.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace curvcap {

namespace {

struct Seg {
  Point a, b;
};

std::vector<Seg> edges(const Square& q) {
  Point c0 = q.corner, c1 = q.corner + Point(q.side, 0), c2 = q.corner + Point(q.side, q.side),
        c3 = q.corner + Point(0, q.side);
  return {{c0, c1}, {c1, c2}, {c2, c3}, {c3, c0}};
}

Point foot_on_segment(const Point& x, const Seg& s) {
  Point d = s.b - s.a;
  double t = std::clamp(std::real((x - s.a) * std::conj(d)) / std::norm(d), 0.0, 1.0);
  return s.a + t * d;
}

void circle_circle(const Ball& p, const Ball& q, std::vector<Point>& out) {
  Point d = q.center - p.center;
  double l = std::abs(d);
  if (l == 0.0 || l > p.radius + q.radius || l < std::abs(p.radius - q.radius)) return;
  double a = (p.radius * p.radius - q.radius * q.radius + l * l) / (2 * l);
  double h = std::sqrt(std::max(0.0, p.radius * p.radius - a * a));
  Point u = d / l;
  Point m = p.center + a * u;
  out.push_back(m + h * Point(-u.imag(), u.real()));
  out.push_back(m - h * Point(-u.imag(), u.real()));
}

void circle_segment(const Ball& c, const Seg& s, std::vector<Point>& out) {
  Point d = s.b - s.a, f = s.a - c.center;
  double A = std::norm(d), B = 2 * std::real(f * std::conj(d)), C = std::norm(f) - c.radius * c.radius;
  double disc = B * B - 4 * A * C;
  if (disc < 0) return;
  double r = std::sqrt(disc);
  for (double t : {(-B - r) / (2 * A), (-B + r) / (2 * A)})
    if (t >= 0.0 && t <= 1.0) out.push_back(s.a + t * d);
}

void segment_segment(const Seg& s, const Seg& t, std::vector<Point>& out) {
  // Axis-aligned edges: only a vertical/horizontal pair can cross at a point.
  bool sv = s.a.real() == s.b.real(), tv = t.a.real() == t.b.real();
  if (sv == tv) return;
  const Seg& v = sv ? s : t;
  const Seg& h = sv ? t : s;
  double x = v.a.real(), y = h.a.imag();
  auto within = [](double z, double p, double q) { return z >= std::min(p, q) && z <= std::max(p, q); };
  if (within(x, h.a.real(), h.b.real()) && within(y, v.a.imag(), v.b.imag())) out.emplace_back(x, y);
}

}  // namespace

SuppressionProfile::SuppressionProfile(std::vector<Ball> disks, std::vector<Square> squares, double floor)
    : disks_(std::move(disks)), squares_(std::move(squares)), floor_(floor) {
  if (!(floor_ >= 0.0) || !std::isfinite(floor_)) throw std::invalid_argument("suppression floor must be >= 0");
  double scale = 0.0;
  for (const auto& b : disks_) {
    if (!(b.radius > 0.0) || !std::isfinite(b.radius)) throw std::invalid_argument("suppression disk radius must be positive");
    scale = std::max(scale, std::abs(b.center) + b.radius);
  }
  for (const auto& q : squares_) {
    if (!(q.side > 0.0) || !std::isfinite(q.side)) throw std::invalid_argument("suppression square side must be positive");
    scale = std::max(scale, std::abs(q.corner) + 2 * q.side);
  }
  tol_ = 1e-12 * std::max(scale, 1e-300);

  std::vector<Point> cand;
  std::vector<Seg> segs;
  for (const auto& q : squares_)
    for (const auto& e : edges(q)) {
      segs.push_back(e);
      cand.push_back(e.a);
    }
  for (std::size_t i = 0; i < disks_.size(); ++i) {
    for (std::size_t j = i + 1; j < disks_.size(); ++j) circle_circle(disks_[i], disks_[j], cand);
    for (const auto& s : segs) circle_segment(disks_[i], s, cand);
  }
  for (std::size_t i = 0; i < segs.size(); ++i)
    for (std::size_t j = i + 1; j < segs.size(); ++j) segment_segment(segs[i], segs[j], cand);
  for (const auto& p : cand)
    if (!in_interior(p)) fixed_candidates_.push_back(p);
}

bool SuppressionProfile::in_region(const Point& x) const {
  for (const auto& b : disks_)
    if (std::abs(x - b.center) <= b.radius + tol_) return true;
  for (const auto& q : squares_)
    if (x.real() >= q.corner.real() - tol_ && x.real() <= q.corner.real() + q.side + tol_ &&
        x.imag() >= q.corner.imag() - tol_ && x.imag() <= q.corner.imag() + q.side + tol_)
      return true;
  return false;
}

bool SuppressionProfile::in_interior(const Point& p) const {
  bool on_other_boundary = false;
  for (const auto& b : disks_) {
    double d = std::abs(p - b.center);
    if (d < b.radius - tol_) return true;
    if (d <= b.radius + tol_) on_other_boundary = true;
  }
  for (const auto& q : squares_) {
    double g = q.gauge(p) * q.side;  // sup-norm distance from the center
    if (g < q.side / 2 - tol_) return true;
    if (g <= q.side / 2 + tol_) on_other_boundary = true;
  }
  if (!on_other_boundary) return false;
  // p lies on several boundaries at once; look at a small ring around it.
  const int dirs = 256;
  const double delta = 1e3 * tol_;
  for (int k = 0; k < dirs; ++k) {
    double th = (k + 0.5) * 2.0 * std::numbers::pi / dirs;
    if (!in_region(p + delta * Point(std::cos(th), std::sin(th)))) return false;
  }
  return true;
}

double SuppressionProfile::operator()(const Point& x) const {
  if (!in_region(x)) return floor_;
  double best = INFINITY;
  auto consider = [&](const Point& p) {
    double d = std::abs(x - p);
    if (d < best && !in_interior(p)) best = d;
  };
  for (const auto& p : fixed_candidates_) best = std::min(best, std::abs(x - p));
  for (const auto& b : disks_) {
    Point d = x - b.center;
    double l = std::abs(d);
    consider(l > 0 ? b.center + b.radius * d / l : b.center + Point(b.radius, 0));
  }
  for (const auto& q : squares_)
    for (const auto& e : edges(q)) consider(foot_on_segment(x, e));
  if (!std::isfinite(best)) best = 0.0;
  return std::max(floor_, best);
}

}  // namespace curvcap
