#pragma once

#include <vector>

#include "curvcap/plane/measure.hpp"

namespace curvcap {

struct Segment {
  Point a;
  Point b;
  double length() const { return dist(a, b); }
};

struct SegmentFamily {
  std::vector<Segment> segments;

  double total_length() const;
  double diameter() const;
  // Throws on non-finite endpoints, zero length, or collinear overlap.
  void validate() const;
  double distance_to(const Point& p) const;
  SegmentFamily dilated(double t) const;
};

// Generation-n corner quarter Cantor set on the unit square: 4^n atoms at the
// centers of the surviving squares, each of weight 4^-n, resolution 4^-n.
AtomicMeasure cantor_set(int n);

// Each segment is cut into ceil(L/h) equal pieces; atoms sit at piece
// midpoints carrying the piece length.
AtomicMeasure discretize_segments(const SegmentFamily& e, double h);

double dist_point_segment(const Point& p, const Segment& s);

}  // namespace curvcap
