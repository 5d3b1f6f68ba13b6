#include "curvcap/plane/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace curvcap {

namespace {

std::int64_t floor_shift(std::int64_t v, int s) {
  // Floor division by 2^s for negative values too.
  return v >> s;
}

}  // namespace

DyadicSquare DyadicSquare::parent() const { return {level + 1, floor_shift(i, 1), floor_shift(j, 1)}; }

std::vector<DyadicSquare> DyadicSquare::children() const {
  return {{level - 1, 2 * i, 2 * j},
          {level - 1, 2 * i + 1, 2 * j},
          {level - 1, 2 * i, 2 * j + 1},
          {level - 1, 2 * i + 1, 2 * j + 1}};
}

DyadicSquare DyadicSquare::ancestor_at(int lvl) const {
  if (lvl < level) throw std::invalid_argument("ancestor level below square level");
  int s = lvl - level;
  if (s >= 63) return {lvl, i < 0 ? -1 : 0, j < 0 ? -1 : 0};
  return {lvl, floor_shift(i, s), floor_shift(j, s)};
}

bool DyadicSquare::is_ancestor_of(const DyadicSquare& other) const {
  if (other.level >= level) return false;
  return other.ancestor_at(level) == *this;
}

std::size_t DyadicSquareHash::operator()(const DyadicSquare& q) const {
  std::size_t h = std::hash<std::int64_t>()(q.i);
  h ^= std::hash<std::int64_t>()(q.j) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= std::hash<int>()(q.level) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

Point DyadicLattice::origin() const {
  double half = std::ldexp(1.0, N);
  return w - Point(half, half);
}

double DyadicLattice::side(int level) const { return std::ldexp(1.0, level); }

DyadicSquare DyadicLattice::square_of(const Point& p, int level) const {
  Point o = origin();
  double u = p.real() - o.real();
  double v = p.imag() - o.imag();
  return {level, static_cast<std::int64_t>(std::floor(std::ldexp(u, -level))),
          static_cast<std::int64_t>(std::floor(std::ldexp(v, -level)))};
}

Square DyadicLattice::geometry(const DyadicSquare& q) const {
  double s = side(q.level);
  Point o = origin();
  return {o + Point(static_cast<double>(q.i) * s, static_cast<double>(q.j) * s), s};
}

bool DyadicLattice::contains(const DyadicSquare& q, const Point& p) const {
  return square_of(p, q.level) == q;
}

void DyadicSquareSet::insert(const DyadicSquare& q) {
  if (!members_.insert(q).second) return;
  list_.push_back(q);
  if (std::find(levels_.begin(), levels_.end(), q.level) == levels_.end()) levels_.push_back(q.level);
  DyadicSquare a = q;
  for (int k = 0; k < 64; ++k) {
    a = a.parent();
    if (!strict_ancestors_.insert(a).second) break;
  }
}

bool DyadicSquareSet::has_ancestor_or_self(const DyadicSquare& q) const {
  for (int lvl : levels_)
    if (lvl >= q.level && members_.count(q.ancestor_at(lvl))) return true;
  return false;
}

bool DyadicSquareSet::covers(const DyadicSquare& q) const {
  if (has_ancestor_or_self(q)) return true;
  if (!strict_ancestors_.count(q)) return false;
  for (const auto& c : q.children())
    if (!covers(c)) return false;
  return true;
}

bool DyadicSquareSet::contains_point(const DyadicLattice& lat, const Point& p) const {
  for (int lvl : levels_)
    if (members_.count(lat.square_of(p, lvl))) return true;
  return false;
}

std::vector<DyadicSquare> DyadicSquareSet::maximal() const {
  std::vector<DyadicSquare> out;
  for (const auto& q : list_) {
    bool inside = false;
    for (int lvl : levels_)
      if (lvl > q.level && members_.count(q.ancestor_at(lvl))) {
        inside = true;
        break;
      }
    if (!inside) out.push_back(q);
  }
  return out;
}

}  // namespace curvcap
