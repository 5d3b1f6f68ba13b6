#include "curvcap/tb/martingale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace curvcap {

MartingaleTree::MartingaleTree(const AtomicMeasure& mu, std::vector<Complex> b, const DyadicLattice& lat,
                               const DyadicSquareSet& cover, double c_d)
    : w_(mu.weights().begin(), mu.weights().end()), b_(std::move(b)) {
  if (b_.size() != w_.size()) throw std::invalid_argument("b does not match the measure");
  if (mu.empty()) throw std::invalid_argument("martingale decomposition needs a nonempty measure");
  if (!(c_d > 0.0)) throw std::invalid_argument("paraaccretivity constant must be positive");
  for (std::size_t i = 0; i < w_.size(); ++i) {
    if (!(w_[i] > 0.0)) continue;
    all_.push_back(i);
    mass_ += w_[i];
  }
  if (!(mass_ > 0.0)) throw std::invalid_argument("martingale decomposition needs positive mass");
  if (cover.covers(lat.root())) throw std::invalid_argument("top square is terminal");

  min_b_mean_ = std::numeric_limits<double>::infinity();
  auto guard = [&](const Complex& m, const DyadicSquare& q) {
    double a = std::abs(m);
    min_b_mean_ = std::min(min_b_mean_, a);
    if (!(a * c_d >= 1.0)) {
      std::ostringstream os;
      os << "paraaccretivity violated: |<b>_Q| = " << a << " < 1/C_d on square (level " << q.level << ", " << q.i
         << ", " << q.j << ")";
      throw ParaaccretivityError(os.str());
    }
  };
  root_b_mean_ = mean(all_, mass_, b_);
  guard(root_b_mean_, lat.root());

  auto expandable = [&](const DyadicSquare& q, std::size_t atoms) {
    return atoms >= 2 && q.level > lat.min_level() && !cover.covers(q);
  };
  // Depth-first, children in (i, j) order, so node order is deterministic.
  struct Pending {
    DyadicSquare q;
    std::vector<std::size_t> atoms;
    double mass;
  };
  std::vector<Pending> stack;
  if (all_.size() >= 2 && lat.root().level > lat.min_level()) stack.push_back({lat.root(), all_, mass_});
  while (!stack.empty()) {
    Pending cur = std::move(stack.back());
    stack.pop_back();
    Node node;
    node.square = cur.q;
    node.atoms = cur.atoms;
    node.mass = cur.mass;
    node.b_mean = mean(node.atoms, node.mass, b_);
    guard(node.b_mean, node.square);
    std::map<std::pair<std::int64_t, std::int64_t>, Group> groups;
    std::map<std::pair<std::int64_t, std::int64_t>, DyadicSquare> child_sq;
    for (std::size_t a : cur.atoms) {
      DyadicSquare c = lat.square_of(mu.position(a), cur.q.level - 1);
      auto key = std::make_pair(c.i, c.j);
      groups[key].atoms.push_back(a);
      groups[key].mass += w_[a];
      child_sq[key] = c;
    }
    std::vector<Pending> next;
    for (auto& [key, g] : groups) {
      const DyadicSquare& c = child_sq[key];
      g.transit = expandable(c, g.atoms.size());
      if (g.transit) {
        g.b_mean = mean(g.atoms, g.mass, b_);
        guard(g.b_mean, c);
        next.push_back({c, g.atoms, g.mass});
      }
      node.children.push_back(g);
    }
    nodes_.push_back(std::move(node));
    for (auto it = next.rbegin(); it != next.rend(); ++it) stack.push_back(std::move(*it));
  }
}

void MartingaleTree::check_size(const std::vector<Complex>& f) const {
  if (f.size() != w_.size()) throw std::invalid_argument("function does not match the measure");
}

Complex MartingaleTree::mean(const std::vector<std::size_t>& atoms, double mass, const std::vector<Complex>& f) const {
  Complex s(0, 0);
  for (std::size_t a : atoms) s += w_[a] * f[a];
  return s / mass;
}

Complex MartingaleTree::mean_fb(const std::vector<std::size_t>& atoms, double mass,
                                const std::vector<Complex>& g) const {
  Complex s(0, 0);
  for (std::size_t a : atoms) s += w_[a] * (g[a] * b_[a]);
  return s / mass;
}

std::vector<Complex> MartingaleTree::xi(const std::vector<Complex>& f) const {
  check_size(f);
  Complex c = mean(all_, mass_, f) / root_b_mean_;
  std::vector<Complex> out(w_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * b_[i];
  return out;
}

std::vector<Complex> MartingaleTree::xi_adjoint(const std::vector<Complex>& g) const {
  check_size(g);
  return std::vector<Complex>(w_.size(), mean_fb(all_, mass_, g) / root_b_mean_);
}

std::vector<Complex> MartingaleTree::delta(std::size_t k, const std::vector<Complex>& f) const {
  check_size(f);
  const Node& q = nodes_.at(k);
  std::vector<Complex> out(w_.size(), Complex(0, 0));
  Complex cq = mean(q.atoms, q.mass, f) / q.b_mean;
  for (const auto& g : q.children) {
    if (g.transit) {
      Complex c = mean(g.atoms, g.mass, f) / g.b_mean - cq;
      for (std::size_t a : g.atoms) out[a] = c * b_[a];
    } else {
      for (std::size_t a : g.atoms) out[a] = f[a] - cq * b_[a];
    }
  }
  return out;
}

std::vector<Complex> MartingaleTree::delta_adjoint(std::size_t k, const std::vector<Complex>& g) const {
  check_size(g);
  const Node& q = nodes_.at(k);
  std::vector<Complex> out(w_.size(), Complex(0, 0));
  Complex cq = mean_fb(q.atoms, q.mass, g) / q.b_mean;
  for (const auto& grp : q.children) {
    if (grp.transit) {
      Complex c = mean_fb(grp.atoms, grp.mass, g) / grp.b_mean - cq;
      for (std::size_t a : grp.atoms) out[a] = c;
    } else {
      for (std::size_t a : grp.atoms) out[a] = g[a] - cq;
    }
  }
  return out;
}

Complex MartingaleTree::pairing(const std::vector<Complex>& f, const std::vector<Complex>& g) const {
  check_size(f);
  check_size(g);
  Complex s(0, 0);
  for (std::size_t i = 0; i < w_.size(); ++i) s += w_[i] * (f[i] * g[i]);
  return s;
}

Complex MartingaleTree::integral(const std::vector<Complex>& f) const {
  check_size(f);
  Complex s(0, 0);
  for (std::size_t i = 0; i < w_.size(); ++i) s += w_[i] * f[i];
  return s;
}

double MartingaleTree::norm2(const std::vector<Complex>& f) const {
  check_size(f);
  double s = 0.0;
  for (std::size_t i = 0; i < w_.size(); ++i) s += w_[i] * std::norm(f[i]);
  return s;
}

double MartingaleTree::mass() const { return mass_; }

MartingaleDecomposition martingale_decompose(const MartingaleTree& tree, const std::vector<Complex>& f) {
  MartingaleDecomposition d;
  d.xi = tree.xi(f);
  std::vector<Complex> rest(f);
  for (std::size_t i = 0; i < f.size(); ++i) rest[i] -= d.xi[i];
  d.deltas.reserve(tree.size());
  for (std::size_t k = 0; k < tree.size(); ++k) {
    d.deltas.push_back(tree.delta(k, f));
    for (std::size_t i = 0; i < f.size(); ++i) rest[i] -= d.deltas.back()[i];
  }
  double nf = std::sqrt(tree.norm2(f));
  double nr = std::sqrt(tree.norm2(rest));
  d.residual = nf > 0.0 ? nr / nf : nr;
  return d;
}

NormRatios norm_equivalence(const MartingaleTree& tree, const std::vector<std::vector<Complex>>& samples) {
  NormRatios r;
  r.lower = std::numeric_limits<double>::infinity();
  r.upper = 0.0;
  for (const auto& f : samples) {
    double nf = tree.norm2(f);
    if (!(nf > 0.0)) continue;
    double s = tree.norm2(tree.xi(f));
    for (std::size_t k = 0; k < tree.size(); ++k) s += tree.norm2(tree.delta(k, f));
    r.lower = std::min(r.lower, s / nf);
    r.upper = std::max(r.upper, s / nf);
    ++r.samples;
  }
  if (r.samples == 0) r.lower = 0.0;
  return r;
}

}  // namespace curvcap
