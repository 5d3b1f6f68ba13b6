#include "curvcap/plane/generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace curvcap {

double SegmentFamily::total_length() const {
  double s = 0.0;
  for (const auto& seg : segments) s += seg.length();
  return s;
}

double SegmentFamily::diameter() const {
  std::vector<Point> pts;
  for (const auto& seg : segments) {
    pts.push_back(seg.a);
    pts.push_back(seg.b);
  }
  return curvcap::diameter(pts);
}

namespace {

double cross(const Point& u, const Point& v) { return u.real() * v.imag() - u.imag() * v.real(); }

bool collinear_overlap(const Segment& s, const Segment& t) {
  Point d = s.b - s.a;
  double len = std::abs(d);
  double tol = 1e-12 * std::max({len, t.length(), std::abs(s.a), std::abs(t.a), 1e-300});
  if (std::abs(cross(d, t.a - s.a)) / len > tol || std::abs(cross(d, t.b - s.a)) / len > tol)
    return false;
  Point u = d / len;
  double a0 = 0.0, a1 = len;
  double b0 = std::real((t.a - s.a) * std::conj(u));
  double b1 = std::real((t.b - s.a) * std::conj(u));
  if (b0 > b1) std::swap(b0, b1);
  return std::min(a1, b1) - std::max(a0, b0) > tol;
}

}  // namespace

void SegmentFamily::validate() const {
  for (const auto& s : segments) {
    for (const Point& p : {s.a, s.b})
      if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
        throw std::invalid_argument("segment endpoint is not finite");
    if (!(s.length() > 0.0)) throw std::invalid_argument("segment has zero length");
  }
  for (std::size_t i = 0; i < segments.size(); ++i)
    for (std::size_t j = i + 1; j < segments.size(); ++j)
      if (collinear_overlap(segments[i], segments[j]))
        throw std::invalid_argument("segments overlap along a common line");
}

double dist_point_segment(const Point& p, const Segment& s) {
  Point d = s.b - s.a;
  double l2 = std::norm(d);
  double t = l2 > 0 ? std::clamp(std::real((p - s.a) * std::conj(d)) / l2, 0.0, 1.0) : 0.0;
  return dist(p, s.a + t * d);
}

double SegmentFamily::distance_to(const Point& p) const {
  double best = INFINITY;
  for (const auto& s : segments) best = std::min(best, dist_point_segment(p, s));
  return best;
}

SegmentFamily SegmentFamily::dilated(double t) const {
  SegmentFamily out = *this;
  for (auto& s : out.segments) {
    s.a *= t;
    s.b *= t;
  }
  return out;
}

AtomicMeasure cantor_set(int n) {
  if (n < 0) throw std::invalid_argument("cantor generation must be nonnegative");
  if (n > 8) throw std::invalid_argument("cantor generation above 8 is not supported");
  std::vector<Point> corners{Point(0, 0)};
  double side = 1.0;
  for (int g = 0; g < n; ++g) {
    double off = 0.75 * side;
    std::vector<Point> next;
    next.reserve(corners.size() * 4);
    for (const auto& c : corners)
      for (int dx = 0; dx < 2; ++dx)
        for (int dy = 0; dy < 2; ++dy) next.push_back(c + Point(dx * off, dy * off));
    corners = std::move(next);
    side *= 0.25;
  }
  std::vector<Point> pos;
  pos.reserve(corners.size());
  for (const auto& c : corners) pos.push_back(c + Point(side / 2, side / 2));
  std::vector<double> w(pos.size(), side);
  return AtomicMeasure(std::move(pos), std::move(w), side);
}

AtomicMeasure discretize_segments(const SegmentFamily& e, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("discretization step must be positive");
  std::vector<Point> pos;
  std::vector<double> w;
  if (e.segments.empty()) return AtomicMeasure(pos, w, h);
  e.validate();
  for (const auto& s : e.segments) {
    double len = s.length();
    auto k = static_cast<std::size_t>(std::max(1.0, std::ceil(len / h - 1e-12)));
    double piece = len / static_cast<double>(k);
    for (std::size_t q = 0; q < k; ++q) {
      double t = (static_cast<double>(q) + 0.5) / static_cast<double>(k);
      pos.push_back(s.a + t * (s.b - s.a));
      w.push_back(piece);
    }
  }
  return AtomicMeasure(std::move(pos), std::move(w), h);
}

}  // namespace curvcap
