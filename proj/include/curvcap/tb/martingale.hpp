#pragma once

#include <stdexcept>
#include <vector>

#include "curvcap/plane/dyadic.hpp"
#include "curvcap/plane/measure.hpp"

namespace curvcap {

class ParaaccretivityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// b-adapted martingale differences on a fixed lattice. Functions are complex
// vectors indexed like the atoms of mu; pairings are bilinear,
// <f, g> = sum w_i f_i g_i. Recursion runs through transit squares holding at
// least two atoms; a child that is terminal or holds one atom is a stopping
// square and enters Delta_Q through the terminal-child formula.
class MartingaleTree {
 public:
  MartingaleTree(const AtomicMeasure& mu, std::vector<Complex> b, const DyadicLattice& lat,
                 const DyadicSquareSet& cover, double c_d);

  std::size_t size() const { return nodes_.size(); }  // number of Delta_Q operators
  std::size_t atom_count() const { return w_.size(); }
  const DyadicSquare& square(std::size_t k) const { return nodes_[k].square; }
  const std::vector<Complex>& b() const { return b_; }
  // min |<b>_Q| over the squares whose averages enter the formulas.
  double min_b_mean() const { return min_b_mean_; }

  std::vector<Complex> xi(const std::vector<Complex>& f) const;
  std::vector<Complex> xi_adjoint(const std::vector<Complex>& g) const;
  std::vector<Complex> delta(std::size_t k, const std::vector<Complex>& f) const;
  std::vector<Complex> delta_adjoint(std::size_t k, const std::vector<Complex>& g) const;

  Complex pairing(const std::vector<Complex>& f, const std::vector<Complex>& g) const;
  Complex integral(const std::vector<Complex>& f) const;
  double norm2(const std::vector<Complex>& f) const;  // sum w |f|^2
  double mass() const;

 private:
  struct Group {
    std::vector<std::size_t> atoms;
    bool transit = false;  // an expanded square; otherwise a stopping square
    double mass = 0.0;
    Complex b_mean;
  };
  struct Node {
    DyadicSquare square;
    std::vector<std::size_t> atoms;
    double mass = 0.0;
    Complex b_mean;
    std::vector<Group> children;
  };
  Complex mean(const std::vector<std::size_t>& atoms, double mass, const std::vector<Complex>& f) const;
  Complex mean_fb(const std::vector<std::size_t>& atoms, double mass, const std::vector<Complex>& g) const;
  void check_size(const std::vector<Complex>& f) const;

  std::vector<double> w_;
  std::vector<Complex> b_;
  std::vector<std::size_t> all_;
  double mass_ = 0.0;
  Complex root_b_mean_;
  std::vector<Node> nodes_;
  double min_b_mean_ = 0.0;
};

struct MartingaleDecomposition {
  std::vector<Complex> xi;
  std::vector<std::vector<Complex>> deltas;  // one per tree square, in tree order
  double residual = 0.0;                     // ||f - xi - sum deltas|| / ||f||
};

MartingaleDecomposition martingale_decompose(const MartingaleTree& tree, const std::vector<Complex>& f);

struct NormRatios {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t samples = 0;
};

// min and max over nonzero samples of (||Xi f||^2 + sum ||Delta_Q f||^2) / ||f||^2.
NormRatios norm_equivalence(const MartingaleTree& tree, const std::vector<std::vector<Complex>>& samples);

}  // namespace curvcap
