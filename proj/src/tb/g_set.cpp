#include "curvcap/tb/g_set.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "curvcap/tb/lattice.hpp"
#include "curvcap/util/parallel.hpp"

namespace curvcap {

double GSetEstimate::phi(const Point& x) const {
  const std::size_t t = in_w.size(), n = atoms.size();
  if (t == 0) return 0.0;
  std::vector<double> d2(n);
  for (std::size_t a = 0; a < n; ++a) d2[a] = dist2(x, atoms[a]);
  std::vector<double> values;
  values.reserve(t * t);
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = 0; j < t; ++j) {
      double best = INFINITY;
      for (std::size_t a = 0; a < n; ++a)
        if (!in_w[i][a] && !in_w[j][a]) best = std::min(best, d2[a]);
      values.push_back(best);
    }
  std::size_t k = static_cast<std::size_t>(std::ceil(beta * static_cast<double>(values.size())));
  k = std::clamp<std::size_t>(k, 1, values.size());
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k - 1), values.end());
  return std::sqrt(values[k - 1]);
}

double GSetEstimate::pair_probability(std::size_t atom) const {
  const std::size_t t = in_w.size();
  std::size_t hits = 0;
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = 0; j < t; ++j) hits += !in_w[i][atom] && !in_w[j][atom];
  return t ? static_cast<double>(hits) / static_cast<double>(t * t) : 0.0;
}

GSetEstimate g_set_estimate(const AtomicMeasure& F, const ExceptionalOracle& oracle, int N, double data_radius,
                            const TbConfig& cfg) {
  cfg.validate();
  if (cfg.trials < 30) throw std::invalid_argument("the G-set estimate needs at least 30 trials");
  const std::size_t t = static_cast<std::size_t>(cfg.trials), n = F.size();
  GSetEstimate g;
  g.atoms.assign(F.positions().begin(), F.positions().end());
  g.weights.assign(F.weights().begin(), F.weights().end());
  g.beta = cfg.beta_value();
  g.in_w.resize(t);
  g.lattices.resize(t);
  parallel_for(t, [&](std::size_t k) {
    g.lattices[k] = random_lattice(cfg.seed, k, N, data_radius);
    g.in_w[k] = oracle(k, g.lattices[k]);
    if (g.in_w[k].size() != n) throw std::invalid_argument("exceptional-set oracle returned the wrong length");
  });
  g.mass_f = F.mass();
  g.hypothesis_met = true;
  for (std::size_t k = 0; k < t; ++k) {
    double mw = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      if (g.in_w[k][a]) mw += g.weights[a];
    double frac = g.mass_f > 0.0 ? mw / g.mass_f : 0.0;
    g.max_w_fraction = std::max(g.max_w_fraction, frac);
    if (mw > cfg.delta2 * g.mass_f) g.hypothesis_met = false;
  }
  g.p1.assign(n, 0.0);
  g.in_g.assign(n, 0);
  const double threshold = (1.0 - cfg.delta2) / 2.0;
  for (std::size_t a = 0; a < n; ++a) {
    std::size_t outside = 0;
    for (std::size_t k = 0; k < t; ++k) outside += !g.in_w[k][a];
    g.p1[a] = static_cast<double>(outside) / static_cast<double>(t);
    g.in_g[a] = g.p1[a] > threshold;
    if (g.in_g[a]) g.mass_g += g.weights[a];
  }
  g.bound = (1.0 - cfg.delta2) / (1.0 + cfg.delta2) * g.mass_f;
  g.bound_holds = g.mass_g >= g.bound * (1.0 - 1e-12);
  return g;
}

}  // namespace curvcap
