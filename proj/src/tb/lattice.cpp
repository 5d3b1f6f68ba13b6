#include "curvcap/tb/lattice.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "curvcap/util/rng.hpp"

namespace curvcap {

DyadicLattice random_lattice(std::uint64_t seed, std::uint64_t draw_index, int N, double data_radius,
                             int depth) {
  if (N < 3 || N > 60) throw std::invalid_argument("lattice exponent out of range");
  if (!(data_radius >= 0.0) || data_radius > std::ldexp(1.0, N - 3))
    throw std::invalid_argument("data does not fit in B(0, 2^(N-3)) for this lattice exponent");
  DrawStream rng(seed, draw_index, 1);
  double h = std::ldexp(1.0, N - 1);
  double x = rng.uniform(-h, h), y = rng.uniform(-h, h);
  return DyadicLattice{N, Point(x, y), depth};
}

int lattice_exponent_for(const AtomicMeasure& mu) {
  double r = 0.0;
  for (const auto& p : mu.positions()) r = std::max(r, std::abs(p));
  int N = 3;
  while (std::ldexp(1.0, N - 3) < r) ++N;
  return N;
}

bool is_terminal(const DyadicSquareSet& cover, const DyadicSquare& q) { return cover.covers(q); }

SquareLabels classify_squares(const DyadicLattice& lat, const DyadicSquareSet& cover, const AtomicMeasure& mu,
                              int max_depth) {
  SquareLabels out;
  const int top = lat.root_level();
  double uncovered = 0.0;
  for (std::size_t a = 0; a < mu.size(); ++a)
    if (!cover.contains_point(lat, mu.position(a))) uncovered += mu.weight(a);
  for (int d = 0; d <= max_depth; ++d) {
    std::map<std::pair<std::int64_t, std::int64_t>, SquareLabel> level;
    for (std::size_t a = 0; a < mu.size(); ++a) {
      if (!(mu.weight(a) > 0.0)) continue;
      DyadicSquare q = lat.square_of(mu.position(a), top - d);
      auto& s = level[{q.i, q.j}];
      s.square = q;
      s.mass += mu.weight(a);
      s.atoms += 1;
    }
    for (auto& [key, s] : level) {
      s.terminal = is_terminal(cover, s.square);
      out.squares.push_back(s);
    }
  }
  out.root_terminal = is_terminal(cover, lat.root());
  out.uncovered_mass = uncovered;
  return out;
}

}  // namespace curvcap
