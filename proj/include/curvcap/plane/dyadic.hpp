#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_set>
#include <vector>

#include "curvcap/plane/geometry.hpp"

namespace curvcap {

// Square of side 2^level with half-open extent
// origin + [i 2^level, (i+1) 2^level) x [j 2^level, (j+1) 2^level).
struct DyadicSquare {
  int level = 0;
  std::int64_t i = 0;
  std::int64_t j = 0;

  bool operator==(const DyadicSquare&) const = default;
  DyadicSquare parent() const;
  std::vector<DyadicSquare> children() const;
  bool is_ancestor_of(const DyadicSquare& other) const;  // strict
  DyadicSquare ancestor_at(int lvl) const;
};

struct DyadicSquareHash {
  std::size_t operator()(const DyadicSquare& q) const;
};

// Translated dyadic lattice D(w). The top square is w + [-2^N, 2^N)^2 at
// level N + 1; squares are generated down to `depth` levels below it.
struct DyadicLattice {
  int N = 0;
  Point w;
  int depth = 30;

  int root_level() const { return N + 1; }
  int min_level() const { return N + 1 - depth; }
  Point origin() const;
  DyadicSquare root() const { return {root_level(), 0, 0}; }
  double side(int level) const;
  DyadicSquare square_of(const Point& p, int level) const;
  Square geometry(const DyadicSquare& q) const;
  bool contains(const DyadicSquare& q, const Point& p) const;
};

inline std::vector<DyadicSquare> dyadic_children(const DyadicSquare& q) { return q.children(); }
inline DyadicSquare dyadic_parent(const DyadicSquare& q) { return q.parent(); }

// Finite family of squares of one lattice, answering point membership and
// "is this square contained in the union" queries.
class DyadicSquareSet {
 public:
  void insert(const DyadicSquare& q);
  bool contains(const DyadicSquare& q) const { return members_.count(q) > 0; }
  bool has_ancestor_or_self(const DyadicSquare& q) const;
  bool covers(const DyadicSquare& q) const;
  bool contains_point(const DyadicLattice& lat, const Point& p) const;
  std::size_t size() const { return list_.size(); }
  bool empty() const { return list_.empty(); }
  const std::vector<DyadicSquare>& squares() const { return list_; }
  // Members not contained in another member.
  std::vector<DyadicSquare> maximal() const;

 private:
  std::unordered_set<DyadicSquare, DyadicSquareHash> members_;
  std::unordered_set<DyadicSquare, DyadicSquareHash> strict_ancestors_;
  std::vector<DyadicSquare> list_;
  std::vector<int> levels_;
};

}  // namespace curvcap
