#include "curvcap/tb/bad_squares.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "curvcap/tb/lattice.hpp"
#include "curvcap/util/parallel.hpp"

namespace curvcap {

double TbConfig::beta_value() const {
  return beta ? *beta : (1.0 - delta2) * (1.0 - delta2) / 4.0;
}

void TbConfig::validate() const {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (!(M > 0.0)) throw std::invalid_argument("M must be positive");
  if (!(eps_b > 0.0 && eps_b < 1.0)) throw std::invalid_argument("eps_b must lie in (0, 1)");
  if (!(delta2 > 0.0 && delta2 < 1.0)) throw std::invalid_argument("delta2 must lie in (0, 1)");
  double b = beta_value();
  if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
}

bool boundary_negligible(const AtomicMeasure& mu, const Square& r, double M, double r_floor) {
  std::vector<std::pair<double, double>> d;
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    d.emplace_back(dist_to_square_boundary(r, mu.position(i)), mu.weight(i));
    total += mu.weight(i);
  }
  if (total <= M * r_floor) return true;
  std::sort(d.begin(), d.end());
  double cum = 0.0;
  for (std::size_t k = 0; k < d.size();) {
    double rad = std::max(d[k].first, r_floor);
    while (k < d.size() && d[k].first <= rad) cum += d[k++].second;
    if (cum > M * rad) return false;
  }
  return true;
}

double bad_threshold(double lq, double lr) { return 16.0 * std::pow(lq, 0.25) * std::pow(lr, 0.75); }

double dist_to_grid(const Square& q, const DyadicLattice& lat, int level) {
  const double L = lat.side(level);
  auto axis = [&](double a, double o) {
    double u = a - o;
    double r = u - L * std::floor(u / L);
    if (r == 0.0 || r + q.side >= L) return 0.0;
    return std::min(r, L - (r + q.side));
  };
  Point o = lat.origin();
  return std::min(axis(q.corner.real(), o.real()), axis(q.corner.imag(), o.imag()));
}

BadVerdict is_bad(const DyadicSquare& q, const DyadicLattice& lat1, const DyadicLattice& lat2, int m, double M,
                  const AtomicMeasure& mu) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  const Square qs = lat1.geometry(q);
  const double lq = qs.side;
  const int top = lat2.root_level();
  for (int k = q.level + m; k <= top; ++k) {
    if (dist_to_grid(qs, lat2, k) <= bad_threshold(lq, lat2.side(k))) return {true, 'a', k};
  }
  if (mu.empty()) return {};

  const double total = mu.mass();
  const double reach = total / M;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& p : mu.positions()) {
    xmin = std::min(xmin, p.real());
    xmax = std::max(xmax, p.real());
    ymin = std::min(ymin, p.imag());
    ymax = std::max(ymax, p.imag());
  }
  xmin -= reach;
  xmax += reach;
  ymin -= reach;
  ymax += reach;
  const Square big = dilate_square(qs, std::ldexp(1.0, m + 2) + 1.0);
  const double floor_r = mu.resolution();
  const int lowest = std::max(q.level - m + 1, static_cast<int>(std::ceil(std::log2(floor_r))));
  const Point o = lat2.origin();
  for (int k = lowest; k <= std::min(top, q.level + m + 2); ++k) {
    const double L = lat2.side(k);
    // R = o + [i L, (i+1) L) x [j L, (j+1) L) inside the closed dilate and
    // meeting the expanded support box.
    auto range = [&](double lo_big, double hi_big, double lo_box, double hi_box, double org) {
      double lo = std::max(std::ceil((lo_big - org) / L), std::floor((lo_box - org) / L));
      double hi = std::min(std::floor((hi_big - org) / L) - 1.0, std::floor((hi_box - org) / L));
      return std::make_pair(lo, hi);
    };
    auto [i0, i1] = range(big.corner.real(), big.corner.real() + big.side, xmin, xmax, o.real());
    auto [j0, j1] = range(big.corner.imag(), big.corner.imag() + big.side, ymin, ymax, o.imag());
    for (double i = i0; i <= i1; ++i)
      for (double j = j0; j <= j1; ++j) {
        Square r{o + Point(i * L, j * L), L};
        if (!boundary_negligible(mu, r, M, floor_r)) return {true, 'b', k};
      }
  }
  return {};
}

Interval wilson_interval(std::size_t successes, std::size_t n) {
  if (n == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  double nn = static_cast<double>(n), p = static_cast<double>(successes) / nn;
  double denom = 1 + z * z / nn;
  double centre = (p + z * z / (2 * nn)) / denom;
  double half = z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

BadProbability bad_probability_mc(const DyadicSquare& q, const DyadicLattice& lat1, const AtomicMeasure& mu,
                                  double data_radius, const TbConfig& cfg) {
  cfg.validate();
  const std::size_t n = static_cast<std::size_t>(cfg.trials);
  std::vector<BadVerdict> verdicts(n);
  std::vector<DyadicLattice> lats(n);
  parallel_for(n, [&](std::size_t t) {
    lats[t] = random_lattice(cfg.seed, t, lat1.N, data_radius, lat1.depth);
    verdicts[t] = is_bad(q, lat1, lats[t], cfg.m, cfg.M, mu);
  });
  BadProbability out;
  out.trials = n;
  for (std::size_t t = 0; t < n; ++t) {
    if (verdicts[t].bad) {
      ++out.bad;
      (verdicts[t].reason == 'a' ? out.by_a : out.by_b) += 1;
    }
    out.rows.push_back({t, cfg.seed, lats[t].w, verdicts[t].bad ? 1.0 : 0.0});
  }
  out.estimate = static_cast<double>(out.bad) / static_cast<double>(n);
  out.ci = wilson_interval(out.bad, n);
  return out;
}

std::string mc_csv(const std::vector<McRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "trial,seed,w_x,w_y,observable\n";
  for (const auto& r : rows)
    os << r.trial << ',' << r.seed << ',' << r.w.real() << ',' << r.w.imag() << ',' << r.observable << '\n';
  return os.str();
}

}  // namespace curvcap
