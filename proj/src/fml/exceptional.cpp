#include "curvcap/fml/exceptional.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "curvcap/kernels/cauchy.hpp"
#include "curvcap/plane/vitali.hpp"
#include "curvcap/util/parallel.hpp"

namespace curvcap {

double ahlfors_radius(const AtomicMeasure& m, const Point& x, double C0, std::optional<double> r_min) {
  if (!(C0 > 0.0)) throw std::invalid_argument("C0 must be positive");
  if (m.empty()) return 0.0;
  const double floor_r = r_min ? *r_min : m.resolution();
  // mu(B(x, r)) <= mass, so no radius beyond mass / C0 qualifies.
  const double cutoff = m.mass() / C0;
  if (!(floor_r < cutoff)) return 0.0;
  std::vector<std::pair<double, double>> d;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double r = dist(x, m.position(i));
    if (r < cutoff) d.emplace_back(r, m.weight(i));
  }
  std::sort(d.begin(), d.end());
  // On [d_k, d_{k+1}) the closed-ball mass is the cumulative mass through d_k.
  double best = 0.0, cum = 0.0;
  for (std::size_t k = 0; k < d.size();) {
    const double dk = d[k].first;
    while (k < d.size() && d[k].first == dk) cum += d[k++].second;
    const double next = k < d.size() ? d[k].first : INFINITY;
    const double lo = std::max(dk, floor_r);
    const double hi = std::min(next, cum / C0);
    if (lo < hi) best = std::max(best, hi);
  }
  return best;
}

bool HSet::contains(const Point& p) const {
  for (const auto& b : balls)
    if (contains_closed(b, p)) return true;
  return false;
}

HSet build_H(const AtomicMeasure& mu, double C0, std::optional<double> r_min) {
  HSet h;
  h.ahlfors.resize(mu.size());
  parallel_for(mu.size(), [&](std::size_t i) { h.ahlfors[i] = ahlfors_radius(mu, mu.position(i), C0, r_min); });
  std::vector<Ball> cand;
  std::vector<std::size_t> owner;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (h.ahlfors[i] > 0.0) {
      cand.push_back({mu.position(i), h.ahlfors[i]});
      owner.push_back(i);
    }
  for (std::size_t k : vitali_select(cand)) {
    h.centers.push_back(cand[k].center);
    h.radii.push_back(cand[k].radius);
    h.balls.push_back({cand[k].center, 5.0 * cand[k].radius});
  }
  h.sum_R = pairwise_sum(h.radii);
  h.bound = mu.mass() / C0;
  h.bound_holds = h.sum_R <= h.bound * (1.0 + 1e-12);
  return h;
}

bool DyadicFamily::contains(const Point& p) const {
  for (const auto& g : geoms)
    if (g.contains_half_open(p)) return true;
  return false;
}

namespace {

void finish(DyadicFamily& out, const DyadicLattice& lat, const std::vector<DyadicSquare>& squares) {
  out.squares = squares;
  std::sort(out.squares.begin(), out.squares.end(), [](const DyadicSquare& a, const DyadicSquare& b) {
    return std::tie(a.level, a.i, a.j) < std::tie(b.level, b.i, b.j);
  });
  std::vector<double> sides;
  for (const auto& q : out.squares) {
    out.geoms.push_back(lat.geometry(q));
    sides.push_back(out.geoms.back().side);
  }
  out.total_side = pairwise_sum(sides);
}

}  // namespace

HDSet build_HD(const HSet& h, const DyadicLattice& lat) {
  DyadicSquareSet all;
  for (std::size_t b = 0; b < h.balls.size(); ++b) {
    const double R = h.radii[b];
    int k = static_cast<int>(std::floor(std::log2(20.0 * R)));
    while (lat.side(k + 1) <= 20.0 * R) ++k;
    while (lat.side(k) > 20.0 * R) --k;
    if (!(lat.side(k) > 10.0 * R)) throw std::logic_error("no dyadic side in (10R, 20R]");
    if (k > lat.root_level()) throw std::invalid_argument("lattice too small");
    const Ball& ball = h.balls[b];
    const DyadicSquare lo = lat.square_of(ball.center - Point(ball.radius, ball.radius), k);
    const DyadicSquare hi = lat.square_of(ball.center + Point(ball.radius, ball.radius), k);
    for (std::int64_t i = lo.i - 1; i <= hi.i; ++i)
      for (std::int64_t j = lo.j - 1; j <= hi.j; ++j) {
        DyadicSquare q{k, i, j};
        if (dist_to_square(lat.geometry(q), ball.center) <= ball.radius) all.insert(q);
      }
  }
  HDSet out;
  finish(out, lat, all.maximal());
  out.bound = 80.0 * h.sum_R;
  out.bound_holds = out.total_side <= out.bound * (1.0 + 1e-12);
  return out;
}

bool SSet::contains(const Point& p) const {
  for (const auto& b : balls)
    if (dist2(p, b.center) < b.radius * b.radius) return true;
  return false;
}

SSet build_S(const ComplexAtomicMeasure& nu, const AtomicMeasure& mu, double alpha, std::span<const double> cstar) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha_S must be positive");
  if (!cstar.empty() && cstar.size() != mu.size()) throw std::invalid_argument("one C_* value per atom is required");
  SSet s;
  s.alpha = alpha;
  std::vector<double> eps(mu.size(), 0.0);
  parallel_for(mu.size(), [&](std::size_t i) {
    if (!cstar.empty() && !(cstar[i] > alpha)) return;
    const auto bp = cauchy_breakpoints(nu, mu.position(i));
    for (std::size_t k = 0; k < bp.value.size(); ++k)
      if (std::abs(bp.value[k]) > alpha) eps[i] = std::max(eps[i], bp.distance[k]);
  });
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (eps[i] > 0.0) {
      s.centers.push_back(mu.position(i));
      s.eps.push_back(eps[i]);
      s.balls.push_back({mu.position(i), eps[i]});
    }
  return s;
}

DyadicFamily build_TD(const AtomicMeasure& mu, const ComplexAtomicMeasure& nu, const DyadicLattice& lat, double C_d) {
  if (!(C_d > 1.0)) throw std::invalid_argument("C_d must exceed 1");
  if (nu.size() != mu.size()) throw std::invalid_argument("nu must share the atoms of mu");
  std::vector<DyadicSquare> found;
  // Each frame is a square and the atoms it holds.
  struct Frame {
    DyadicSquare q;
    std::vector<std::size_t> atoms;
  };
  std::vector<Frame> stack;
  {
    Frame root{lat.root(), {}};
    for (std::size_t i = 0; i < mu.size(); ++i)
      if (lat.contains(root.q, mu.position(i))) root.atoms.push_back(i);
    stack.push_back(std::move(root));
  }
  while (!stack.empty()) {
    Frame fr = std::move(stack.back());
    stack.pop_back();
    double m = 0.0;
    Complex v(0, 0);
    for (std::size_t i : fr.atoms) {
      m += mu.weight(i);
      v += nu.weight(i);
    }
    if (!(m > 0.0)) continue;
    if (m >= C_d * std::abs(v)) {
      found.push_back(fr.q);
      continue;
    }
    if (fr.atoms.size() <= 1) continue;
    for (const auto& c : fr.q.children()) {
      Frame ch{c, {}};
      for (std::size_t i : fr.atoms)
        if (lat.contains(c, mu.position(i))) ch.atoms.push_back(i);
      if (!ch.atoms.empty()) stack.push_back(std::move(ch));
    }
  }
  DyadicFamily out;
  finish(out, lat, found);
  return out;
}

SuppressionProfile ExceptionalSets::profile() const {
  std::vector<Square> sq = HD.geoms;
  sq.insert(sq.end(), TD.geoms.begin(), TD.geoms.end());
  return SuppressionProfile(S.balls, sq, 0.0);
}

}  // namespace curvcap
