#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "curvcap/plane/dyadic.hpp"
#include "curvcap/plane/measure.hpp"
#include "curvcap/tb/suppression.hpp"

namespace curvcap {

// sup of the radii r >= r_min with mu(closed B(x, r)) > C0 r; 0 if none.
// r_min defaults to the measure's resolution so that a lone atom does not
// count as a non-Ahlfors disk below its own scale.
double ahlfors_radius(const AtomicMeasure& m, const Point& x, double C0, std::optional<double> r_min = {});

struct HSet {
  std::vector<Point> centers;     // selected x_h
  std::vector<double> radii;      // R(x_h)
  std::vector<Ball> balls;        // B(x_h, 5 R(x_h))
  std::vector<double> ahlfors;    // R(x) per atom of mu
  double sum_R = 0.0;
  double bound = 0.0;             // mu(F) / C0
  bool bound_holds = true;
  bool contains(const Point& p) const;  // closed balls
};

HSet build_H(const AtomicMeasure& mu, double C0, std::optional<double> r_min = {});

struct DyadicFamily {
  std::vector<DyadicSquare> squares;  // pairwise disjoint
  std::vector<Square> geoms;
  double total_side = 0.0;
  bool contains(const Point& p) const;  // half-open squares
};

struct HDSet : DyadicFamily {
  double bound = 0.0;  // 80 sum_R
  bool bound_holds = true;
};

// Dyadic squares of side in (10 R, 20 R] meeting B(x_h, 5 R), reduced to the
// maximal ones. Throws "lattice too small" if a side exceeds the root.
HDSet build_HD(const HSet& h, const DyadicLattice& lat);

struct SSet {
  std::vector<Point> centers;
  std::vector<double> eps;     // eps(x)
  std::vector<Ball> balls;     // open B(x, eps(x))
  double alpha = 0.0;
  bool contains(const Point& p) const;
};

// Atoms x of mu with C_* nu(x) > alpha and eps(x) = the largest breakpoint
// truncation with |C_eps nu(x)| > alpha.
// cstar, when given, holds C_* nu at the atoms of mu and skips the rest.
SSet build_S(const ComplexAtomicMeasure& nu, const AtomicMeasure& mu, double alpha,
             std::span<const double> cstar = {});

// Maximal dyadic squares R with mu(R) > 0 and mu(R) >= C_d |nu(R)|, searched
// top down from the root. nu shares the atoms of mu. Squares holding a single
// atom are not split further.
DyadicFamily build_TD(const AtomicMeasure& mu, const ComplexAtomicMeasure& nu, const DyadicLattice& lat, double C_d);

struct ExceptionalSets {
  HSet H;
  HDSet HD;
  SSet S;
  DyadicFamily TD;
  bool in_W(const Point& p) const { return HD.contains(p) || S.contains(p) || TD.contains(p); }
  // Theta(x) = dist(x, C \ W_D) with W_D taken as the open union.
  SuppressionProfile profile() const;
};

}  // namespace curvcap
