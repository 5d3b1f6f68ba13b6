#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "curvcap/plane/dyadic.hpp"
#include "curvcap/plane/measure.hpp"

namespace curvcap {

struct TbConfig {
  int m = 2;             // good/bad scale gap
  double M = 8.0;        // boundary negligibility constant
  double eps_b = 0.1;    // target bad probability (reported against)
  std::optional<double> beta;  // quantile level; defaults to (1 - delta2)^2 / 4
  double delta2 = 0.5;   // exceptional-mass bound
  int trials = 1000;
  std::uint64_t seed = 0;

  double beta_value() const;
  void validate() const;
};

struct BadVerdict {
  bool bad = false;
  char reason = 0;  // 'a' or 'b'
  int level = 0;    // level of the offending square of the second lattice
};

// mu{x : dist(x, dR) <= r} <= M r for every r >= r_floor, checked exactly at
// the atom distances.
bool boundary_negligible(const AtomicMeasure& mu, const Square& r, double M, double r_floor);

// Whether q (a square of lat1) is bad with respect to lat2. Both conditions
// range over squares of lat2 up to its top level; negligibility uses the
// measure's resolution as radius floor, and condition (b) only looks at
// squares of side at least that resolution.
BadVerdict is_bad(const DyadicSquare& q, const DyadicLattice& lat1, const DyadicLattice& lat2, int m, double M,
                  const AtomicMeasure& mu);

// 16 l(Q)^(1/4) l(R)^(3/4): condition (a) holds when dist(Q, dR) is at most this.
double bad_threshold(double lq, double lr);

// Distance from the closed square to the grid lines of lat at `level`.
double dist_to_grid(const Square& q, const DyadicLattice& lat, int level);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};
Interval wilson_interval(std::size_t successes, std::size_t n);

struct McRow {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  Point w;
  double observable = 0.0;
};

struct BadProbability {
  std::size_t bad = 0;
  std::size_t trials = 0;
  double estimate = 0.0;
  Interval ci;
  std::size_t by_a = 0;
  std::size_t by_b = 0;
  std::vector<McRow> rows;
};

// Second lattices are random_lattice(cfg.seed, t, lat1.N, data_radius).
BadProbability bad_probability_mc(const DyadicSquare& q, const DyadicLattice& lat1, const AtomicMeasure& mu,
                                  double data_radius, const TbConfig& cfg);

std::string mc_csv(const std::vector<McRow>& rows);

}  // namespace curvcap
