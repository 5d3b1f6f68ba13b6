#include "curvcap/tb/carleson.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <tuple>

namespace curvcap {

namespace {

using Key = std::tuple<int, std::int64_t, std::int64_t>;
Key key_of(const DyadicSquare& q) { return {q.level, q.i, q.j}; }

}  // namespace

CarlesonResult carleson_check(const DyadicLattice& lat, const AtomicMeasure& mu,
                              const std::vector<std::pair<DyadicSquare, double>>& a,
                              const std::vector<Complex>& f) {
  if (f.size() != mu.size()) throw std::invalid_argument("function does not match the measure");
  CarlesonResult r;
  std::map<Key, double> coef;
  for (const auto& [q, v] : a) {
    if (!(v >= 0.0)) throw std::invalid_argument("Carleson coefficients must be nonnegative");
    coef[key_of(q)] += v;
  }
  double norm_f = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) norm_f += mu.weight(i) * std::norm(f[i]);
  if (coef.empty()) {
    r.rhs = 0.0;
    return r;
  }

  // Top level: the first one where every family square and every atom share
  // one ancestor; above it the packing ratios repeat.
  int lo = std::numeric_limits<int>::max(), top = std::numeric_limits<int>::min();
  for (const auto& [k, v] : coef) {
    lo = std::min(lo, std::get<0>(k));
    top = std::max(top, std::get<0>(k));
  }
  top = std::max(top, lat.root_level());
  auto common = [&](int lvl) {
    std::optional<DyadicSquare> s;
    for (const auto& [k, v] : coef) {
      DyadicSquare q{std::get<0>(k), std::get<1>(k), std::get<2>(k)};
      DyadicSquare anc = q.ancestor_at(lvl);
      if (s && !(*s == anc)) return false;
      s = anc;
    }
    for (const auto& p : mu.positions())
      if (!(lat.square_of(p, lvl) == *s)) return false;
    return true;
  };
  while (!common(top)) ++top;

  // Masses and f-sums of every square an atom touches between lo and top.
  std::map<Key, std::pair<double, Complex>> stats;
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (int lvl = lo; lvl <= top; ++lvl) {
      auto& s = stats[key_of(lat.square_of(mu.position(i), lvl))];
      s.first += mu.weight(i);
      s.second += mu.weight(i) * f[i];
    }
  std::map<Key, double> packed;
  for (const auto& [k, v] : coef) {
    DyadicSquare q{std::get<0>(k), std::get<1>(k), std::get<2>(k)};
    for (int lvl = q.level; lvl <= top; ++lvl) packed[key_of(q.ancestor_at(lvl))] += v;
    auto it = stats.find(k);
    if (it != stats.end() && it->second.first > 0.0)
      r.lhs += v * std::norm(it->second.second / it->second.first);
  }
  for (const auto& [k, sum] : packed) {
    auto it = stats.find(k);
    if (it == stats.end() || !(it->second.first > 0.0)) continue;
    r.c14 = std::max(r.c14, sum / it->second.first);
  }
  r.rhs = 4.0 * r.c14 * norm_f;
  r.holds = r.lhs <= r.rhs * (1.0 + 1e-12);
  return r;
}

}  // namespace curvcap
