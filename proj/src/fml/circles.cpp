#include "curvcap/fml/circles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "curvcap/util/parallel.hpp"

namespace curvcap {

std::vector<double> gamma_estimates(const WhitneyDecomposition& w, const std::vector<std::size_t>& f,
                                    const AtomicMeasure& e, const OptimizerConfig& cfg) {
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t k = 0; k < f.size(); ++k) {
    const Square q2 = w.squares[f[k]].geom.dilate(2.0);
    std::vector<std::size_t> keep;
    for (std::size_t a = 0; a < e.size(); ++a)
      if (q2.contains_closed(e.position(a))) keep.push_back(a);
    if (keep.empty()) continue;
    out[k] = optimize_gplus(e.restricted(keep), cfg).g_value;
  }
  return out;
}

MuNu build_mu_nu(const WhitneyDecomposition& w, const std::vector<std::size_t>& f, const ComplexAtomicMeasure& nu0,
                 const std::vector<double>& gamma, double resolution) {
  if (gamma.size() != f.size()) throw std::invalid_argument("one capacity estimate per F square is required");
  if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
  MuNu out;
  out.nu0_total = nu0.total();
  PartitionOfUnity pu(w);

  // Push nu0 through the partition: entry k collects int g_{f[k]} d nu0.
  std::vector<std::int64_t> slot(w.squares.size(), -1);
  for (std::size_t k = 0; k < f.size(); ++k) slot[f[k]] = static_cast<std::int64_t>(k);
  std::vector<Complex> pushed(f.size(), Complex(0, 0));
  for (std::size_t a = 0; a < nu0.size(); ++a) {
    std::vector<PartitionTerm> terms;
    try {
      terms = pu.at(nu0.position(a));
    } catch (const std::invalid_argument&) {
      out.uncovered_nu0 += std::abs(nu0.weight(a));
      continue;
    }
    for (const auto& t : terms) {
      if (slot[t.square] < 0) throw std::invalid_argument("nu0 atom reaches a square outside F");
      pushed[static_cast<std::size_t>(slot[t.square])] += t.weight * nu0.weight(a);
    }
  }

  std::vector<Point> pos;
  std::vector<double> wmu;
  std::vector<Complex> wnu;
  double spacing = INFINITY;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const auto& q = w.squares[f[k]];
    CircleInfo c;
    c.square = f[k];
    c.center = q.geom.center();
    c.gamma = gamma[k];
    c.nu_mass = pushed[k];
    out.nu_total += pushed[k];
    if (!(gamma[k] > 0.0)) {
      if (pushed[k] != Complex(0, 0)) throw std::invalid_argument("square carries nu0 mass but has no capacity estimate");
      out.circles.push_back(c);
      continue;
    }
    c.radius = gamma[k] / 10.0;
    if (c.radius > q.geom.side / 4.0) {
      c.radius = q.geom.side / 4.0;
      c.clamped = true;
      ++out.clamped;
    }
    const double circumference = 2.0 * M_PI * c.radius;
    c.atoms = std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(circumference / resolution)));
    const double piece = circumference / static_cast<double>(c.atoms);
    c.length = piece * static_cast<double>(c.atoms);
    spacing = std::min(spacing, 2.0 * c.radius * std::sin(M_PI / static_cast<double>(c.atoms)));
    const Complex density = c.nu_mass / static_cast<double>(c.atoms);
    for (std::size_t t = 0; t < c.atoms; ++t) {
      const double th = 2.0 * M_PI * static_cast<double>(t) / static_cast<double>(c.atoms);
      pos.push_back(c.center + std::polar(c.radius, th));
      wmu.push_back(piece);
      wnu.push_back(density);
    }
    out.b_max = std::max(out.b_max, std::abs(c.nu_mass) / c.length);
    out.circles.push_back(c);
  }
  if (!pos.empty()) {
    out.mu = AtomicMeasure(pos, wmu, spacing);
    out.nu = ComplexAtomicMeasure(pos, wnu, spacing);
    if (out.mu.size() != pos.size()) throw std::invalid_argument("circles overlap");
  }
  const double scale = std::max(std::abs(out.nu0_total), 1e-300);
  out.conservation_error = std::abs(pairwise_sum_of(out.nu.size(), [&](std::size_t i) { return out.nu.weight(i).real(); }) -
                                    out.nu0_total.real()) / scale +
                           std::abs(pairwise_sum_of(out.nu.size(), [&](std::size_t i) { return out.nu.weight(i).imag(); }) -
                                    out.nu0_total.imag()) / scale;
  return out;
}

}  // namespace curvcap
