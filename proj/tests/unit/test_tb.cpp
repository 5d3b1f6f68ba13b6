#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "../support/oracles.hpp"
#include "curvcap/kernels/cauchy.hpp"
#include "curvcap/tb/bad_squares.hpp"
#include "curvcap/tb/carleson.hpp"
#include "curvcap/tb/g_set.hpp"
#include "curvcap/tb/lattice.hpp"
#include "curvcap/tb/martingale.hpp"
#include "curvcap/tb/suppressed.hpp"
#include "curvcap/tb/suppression.hpp"
#include "curvcap/util/rng.hpp"

using namespace curvcap;

namespace {

// |k| <= bound up to one ulp of the bound, both sides evaluated in extended
// precision from the double inputs.
bool within_ulp(Complex k, long double bound) {
  long double kr = k.real(), ki = k.imag();
  double b = static_cast<double>(bound);
  long double ulp = std::nextafter(b, std::numeric_limits<double>::infinity()) - b;
  return std::sqrt(kr * kr + ki * ki) <= bound + ulp;
}

long double inv_abs(Complex d) {
  long double x = d.real(), y = d.imag();
  return 1.0L / std::sqrt(x * x + y * y);
}

AtomicMeasure random_measure(DrawStream& rng, std::size_t n, double radius) {
  std::vector<Point> x;
  std::vector<double> w;
  for (std::size_t i = 0; i < n; ++i) {
    x.emplace_back(rng.uniform(-radius, radius), rng.uniform(-radius, radius));
    w.push_back(rng.uniform(0.1, 1.0));
  }
  return AtomicMeasure(x, w, 1e-3);
}

std::vector<Complex> random_values(DrawStream& rng, std::size_t n) {
  std::vector<Complex> f(n);
  for (auto& v : f) v = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return f;
}

// Modulus in [0.5, 2], phase within pi/4 of the real axis.
std::vector<Complex> accretive_b(DrawStream& rng, std::size_t n) {
  std::vector<Complex> b(n);
  for (auto& v : b) v = std::polar(rng.uniform(0.5, 2.0), rng.uniform(-M_PI / 4, M_PI / 4));
  return b;
}

// dist(p, C \ W) by dense sampling of the shape boundaries, each sample pushed
// slightly outward and kept only if it misses every closed shape.
double profile_oracle(const std::vector<Ball>& disks, const std::vector<Square>& squares, double fl, Point p,
                      double& spacing) {
  const double push = 1e-9;
  auto outside_all = [&](Point q) {
    for (auto& d : disks)
      if (std::abs(q - d.center) <= d.radius) return false;
    for (auto& s : squares)
      if (s.contains_closed(q)) return false;
    return true;
  };
  if (outside_all(p)) return fl;
  double best = INFINITY;
  spacing = 0;
  for (auto& d : disks) {
    const int k = 20000;
    spacing = std::max(spacing, 2 * M_PI * d.radius / k);
    for (int t = 0; t < k; ++t) {
      Point u = std::polar(1.0, 2 * M_PI * t / k);
      Point q = d.center + u * (d.radius + push);
      if (outside_all(q)) best = std::min(best, std::abs(p - q));
    }
  }
  for (auto& s : squares) {
    const int k = 5000;
    spacing = std::max(spacing, s.side / k);
    Point c = s.corner;
    double L = s.side;
    for (int t = 0; t <= k; ++t) {
      double a = L * t / k;
      Point cand[4] = {c + Point(a, -push), c + Point(a, L + push), c + Point(-push, a), c + Point(L + push, a)};
      for (Point q : cand)
        if (outside_all(q)) best = std::min(best, std::abs(p - q));
    }
  }
  return std::max(fl, best);
}

// dist(Q, dR) for closed squares, by cases.
double dist_to_boundary(const Square& q, const Square& r) {
  double qx0 = q.corner.real(), qy0 = q.corner.imag(), qx1 = qx0 + q.side, qy1 = qy0 + q.side;
  double rx0 = r.corner.real(), ry0 = r.corner.imag(), rx1 = rx0 + r.side, ry1 = ry0 + r.side;
  bool inside = qx0 > rx0 && qx1 < rx1 && qy0 > ry0 && qy1 < ry1;
  if (inside) return std::min({qx0 - rx0, rx1 - qx1, qy0 - ry0, ry1 - qy1});
  double dx = std::max({0.0, rx0 - qx1, qx0 - rx1}), dy = std::max({0.0, ry0 - qy1, qy0 - ry1});
  return std::hypot(dx, dy);
}

bool oracle_negligible(const AtomicMeasure& mu, const Square& r, double M, double r_floor) {
  std::vector<double> radii{r_floor};
  for (auto& p : mu.positions()) {
    double px = p.real(), py = p.imag();
    double x0 = r.corner.real(), y0 = r.corner.imag(), x1 = x0 + r.side, y1 = y0 + r.side;
    bool in = px >= x0 && px <= x1 && py >= y0 && py <= y1;
    double d = in ? std::min({px - x0, x1 - px, py - y0, y1 - py})
                  : std::hypot(std::max({0.0, x0 - px, px - x1}), std::max({0.0, y0 - py, py - y1}));
    radii.push_back(d);
  }
  for (double rad : radii) {
    if (rad < r_floor) continue;
    double m = 0;
    for (std::size_t i = 0; i < mu.size(); ++i)
      if (radii[i + 1] <= rad) m += mu.weight(i);
    if (m > M * rad) return false;
  }
  return true;
}

BadVerdict oracle_bad(const DyadicSquare& q, const DyadicLattice& lat1, const DyadicLattice& lat2, int m, double M,
                      const AtomicMeasure& mu) {
  Square qs = lat1.geometry(q);
  for (int k = q.level + m; k <= lat2.root_level(); ++k) {
    DyadicSquare c = lat2.square_of(qs.center(), k);
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj) {
        Square r = lat2.geometry({k, c.i + di, c.j + dj});
        if (dist_to_boundary(qs, r) <= 16 * std::pow(qs.side, 0.25) * std::pow(r.side, 0.75)) return {true, 'a', k};
      }
  }
  if (mu.empty()) return {};
  Square big = qs.dilate(std::ldexp(1.0, m + 2) + 1);
  int lowest = std::max(q.level - m + 1, static_cast<int>(std::ceil(std::log2(mu.resolution()))));
  for (int k = lowest; k <= std::min(lat2.root_level(), q.level + m + 2); ++k) {
    // A square whose boundary is farther than mu(C)/M from every atom is
    // negligible, so only squares near some atom are enumerated.
    double L = lat2.side(k), reach = mu.mass() / M;
    int span = static_cast<int>(std::ceil(reach / L)) + 1;
    for (auto& p : mu.positions()) {
      DyadicSquare c = lat2.square_of(p, k);
      for (int di = -span; di <= span; ++di)
        for (int dj = -span; dj <= span; ++dj) {
          Square r = lat2.geometry({k, c.i + di, c.j + dj});
          bool inside = r.corner.real() >= big.corner.real() && r.corner.imag() >= big.corner.imag() &&
                        r.corner.real() + L <= big.corner.real() + big.side &&
                        r.corner.imag() + L <= big.corner.imag() + big.side;
          if (inside && !oracle_negligible(mu, r, M, mu.resolution())) return {true, 'b', k};
        }
    }
  }
  return {};
}

}  // namespace

TEST_CASE("suppressed kernel examples") {
  CHECK(suppressed_kernel(Point(1, 0), Point(0, 0), 0.0, 0.0) == Complex(1, 0));
  CHECK(suppressed_kernel(Point(1, 0), Point(0, 0), 1.0, 1.0) == Complex(0.5, 0));
  Complex k = suppressed_kernel(Point(0, 0.1), Point(0, 0), 1.0, 1.0);
  CHECK(std::abs(k) == doctest::Approx(0.1 / 1.01).epsilon(1e-14));
  CHECK(std::abs(k) <= 1.0);
  CHECK_THROWS_WITH_AS(suppressed_kernel(Point(1, 1), Point(1, 1), 0.0, 2.0), doctest::Contains("kernel singularity"),
                       std::invalid_argument);
  CHECK(suppressed_kernel(Point(1, 1), Point(1, 1), 1.0, 2.0) == Complex(0, 0));
  CHECK_THROWS_AS(suppressed_kernel(Point(1, 0), Point(0, 0), -1.0, 1.0), std::invalid_argument);

  ComplexAtomicMeasure unit({Point(0, 0)}, {Complex(1, 0)}, 0.1);
  SuppressionProfile one({}, {}, 1.0);
  Complex v = suppressed_cauchy(unit, Point(2, 0), 1.0, one);
  CHECK(v.real() == doctest::Approx(-0.4).epsilon(1e-15));
  CHECK(v.imag() == 0.0);
  SuppressionProfile zero;
  CHECK(suppressed_cauchy(unit, Point(2, 0), 1.0, zero) == cauchy_truncated(unit, Point(2, 0), 1.0));
}

TEST_CASE("suppressed kernel bounds over random Lipschitz profiles") {
  DrawStream rng(11, 0);
  int checked = 0;
  for (int t = 0; t < 10000; ++t) {
    Point x(rng.uniform(-2, 2), rng.uniform(-2, 2)), y(rng.uniform(-2, 2), rng.uniform(-2, 2));
    double d = std::abs(x - y);
    if (d == 0) continue;
    double tx = rng.uniform(0, 3);
    double ty = std::max(0.0, tx + rng.uniform(-1, 1) * d);
    Complex k = suppressed_kernel(x, y, tx, ty);
    CHECK(within_ulp(k, inv_abs(x - y)));
    CHECK(within_ulp(k, 1.0L / std::max(tx, ty)));
    ++checked;
  }
  CHECK(checked > 9900);

  SuppressionProfile prof({Ball{Point(0, 0), 1.0}, Ball{Point(1.2, 0.3), 0.7}},
                          {Square{Point(-1, -2), 1.5}, Square{Point(0.5, -2), 1.5}}, 0.05);
  for (int t = 0; t < 2000; ++t) {
    Point x(rng.uniform(-2, 3), rng.uniform(-3, 2)), y(rng.uniform(-2, 3), rng.uniform(-3, 2));
    Complex k = suppressed_kernel(x, y, prof);
    CHECK(within_ulp(k, inv_abs(x - y)));
    CHECK(within_ulp(k, 1.0L / std::max(prof(x), prof(y))));
  }
}

TEST_CASE("suppressed kernel gradient obeys the Calderon-Zygmund bound") {
  SuppressionProfile prof({Ball{Point(0, 0), 1.0}}, {Square{Point(0.5, 0.5), 1.0}}, 0.02);
  DrawStream rng(12, 0);
  double worst = 0;
  for (int t = 0; t < 3000; ++t) {
    Point x(rng.uniform(-2, 2), rng.uniform(-2, 2)), y(rng.uniform(-2, 2), rng.uniform(-2, 2));
    double d = std::abs(x - y);
    if (d < 1e-2) continue;
    double h = 1e-6 * d;
    Complex gx = (suppressed_kernel(x + h, y, prof) - suppressed_kernel(x - h, y, prof)) / (2 * h);
    Complex gy = (suppressed_kernel(x + Point(0, h), y, prof) - suppressed_kernel(x - Point(0, h), y, prof)) / (2 * h);
    // Frobenius norm of the real Jacobian dominates its operator norm.
    double g = std::sqrt(std::norm(gx) + std::norm(gy));
    worst = std::max(worst, g * d * d);
    CHECK(g <= 8.0 / (d * d) * (1 + 1e-3));
  }
  MESSAGE("max |grad K| |x-y|^2 = " << worst);
}

TEST_CASE("zero suppression reproduces the Cauchy transform") {
  DrawStream rng(13, 0);
  SuppressionProfile zero;
  for (int t = 0; t < 50; ++t) {
    std::vector<Point> x;
    std::vector<Complex> w;
    for (int i = 0; i < 30; ++i) {
      x.emplace_back(rng.uniform(-1, 1), rng.uniform(-1, 1));
      w.emplace_back(rng.uniform(-1, 1), rng.uniform(-1, 1));
    }
    ComplexAtomicMeasure nu(x, w, 1e-3);
    Point z(rng.uniform(-1, 1), rng.uniform(-1, 1));
    double eps = rng.uniform(0, 0.5);
    CHECK(suppressed_cauchy(nu, z, eps, zero) == cauchy_truncated(nu, z, eps));
    CHECK(suppressed_maximal(nu, z, zero) == doctest::Approx(cauchy_maximal(nu, z)).epsilon(1e-13));
  }
}

TEST_CASE("suppressed maximal function is the sup over breakpoints") {
  DrawStream rng(14, 0);
  SuppressionProfile prof({Ball{Point(0.2, 0.1), 0.6}}, {}, 0.01);
  for (int t = 0; t < 30; ++t) {
    std::vector<Point> x;
    std::vector<Complex> w;
    for (int i = 0; i < 20; ++i) {
      x.emplace_back(rng.uniform(-1, 1), rng.uniform(-1, 1));
      w.emplace_back(rng.uniform(-1, 1), rng.uniform(-1, 1));
    }
    ComplexAtomicMeasure nu(x, w, 1e-3);
    Point z(rng.uniform(-1, 1), rng.uniform(-1, 1));
    double best = std::abs(suppressed_cauchy(nu, z, 0.0, prof));
    for (auto& p : nu.positions()) best = std::max(best, std::abs(suppressed_cauchy(nu, z, std::abs(p - z), prof)));
    CHECK(suppressed_maximal(nu, z, prof) == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("suppressed transform stays bounded where the profile dominates the bad scales") {
  // Away from the support the truncations are controlled; with Theta >= eta r0
  // the suppressed maximal function must be finite everywhere we probe.
  DrawStream rng(15, 0);
  for (int t = 0; t < 100; ++t) {
    AtomicMeasure mu = random_measure(rng, 25, 1.0);
    Point x(rng.uniform(-1, 1), rng.uniform(-1, 1));
    double r0 = rng.uniform(0.01, 0.2);
    SuppressionProfile prof({Ball{x, 2 * r0}}, {}, 0.0);
    CHECK(prof(x) >= 0.5 * r0);
    double v = suppressed_maximal(ComplexAtomicMeasure::from_positive(mu), x, prof);
    CHECK(std::isfinite(v));
  }
}

TEST_CASE("operator norm probe on two atoms") {
  AtomicMeasure mu({Point(0, 0), Point(3, 4)}, {0.5, 2.0}, 0.1);
  SuppressionProfile zero;
  auto p = operator_norm_probe(mu, zero, 200, 1);
  CHECK(p.estimate == doctest::Approx(std::sqrt(0.5 * 2.0) / 5.0).epsilon(1e-9));
  SuppressionProfile one({}, {}, 1.0);
  auto q = operator_norm_probe(mu, one, 200, 1);
  CHECK(q.estimate == doctest::Approx(std::sqrt(0.5 * 2.0) * 5.0 / 26.0).epsilon(1e-9));
}

TEST_CASE("suppression profile matches boundary sampling") {
  struct Case {
    std::vector<Ball> disks;
    std::vector<Square> squares;
    double floor;
  };
  std::vector<Case> cases{
      {{Ball{Point(0, 0), 1.0}}, {}, 0.0},
      {{Ball{Point(0, 0), 1.0}, Ball{Point(1.2, 0), 0.8}}, {}, 0.1},
      {{}, {Square{Point(0, 0), 1.0}, Square{Point(1, 0), 1.0}, Square{Point(0, 1), 0.5}}, 0.0},
      {{Ball{Point(0.5, 0.5), 0.6}}, {Square{Point(0, 0), 1.0}, Square{Point(1, 0.25), 0.5}}, 0.02},
  };
  DrawStream rng(16, 0);
  for (auto& c : cases) {
    SuppressionProfile prof(c.disks, c.squares, c.floor);
    for (int t = 0; t < 60; ++t) {
      Point p(rng.uniform(-1.2, 2.2), rng.uniform(-1.2, 1.8));
      double spacing = 0;
      double want = profile_oracle(c.disks, c.squares, c.floor, p, spacing);
      CHECK(prof(p) == doctest::Approx(want).epsilon(0).scale(1).epsilon(spacing + 1e-8));
      CHECK(prof(p) >= 0.0);
    }
    // Seams between adjacent squares carry positive suppression.
    if (c.squares.size() >= 2 && c.disks.empty()) CHECK(prof(Point(1.0, 0.5)) == doctest::Approx(0.5));
    for (int t = 0; t < 300; ++t) {
      Point a(rng.uniform(-1.5, 2.5), rng.uniform(-1.5, 2)), b(rng.uniform(-1.5, 2.5), rng.uniform(-1.5, 2));
      CHECK(std::abs(prof(a) - prof(b)) <= std::abs(a - b) * (1 + 1e-12) + 1e-15);
    }
  }
}

TEST_CASE("random lattices") {
  auto a = random_lattice(7, 3, 6, 8.0), b = random_lattice(7, 3, 6, 8.0);
  CHECK(a.w == b.w);
  CHECK_THROWS_AS(random_lattice(7, 3, 6, 8.5), std::invalid_argument);
  CHECK_THROWS_AS(random_lattice(7, 3, 2, 0.0), std::invalid_argument);

  const int N = 6, draws = 1000;
  double sx = 0, sy = 0;
  for (int k = 0; k < draws; ++k) {
    auto lat = random_lattice(99, k, N, 8.0);
    double h = std::ldexp(1.0, N - 1);
    CHECK(lat.w.real() >= -h);
    CHECK(lat.w.real() < h);
    sx += lat.w.real();
    sy += lat.w.imag();
    Square root = lat.geometry(lat.root());
    for (int t = 0; t < 16; ++t) CHECK(root.contains_half_open(std::polar(8.0, 2 * M_PI * t / 16)));
  }
  double sigma = std::ldexp(1.0, N) / std::sqrt(12.0) / std::sqrt(double(draws));
  CHECK(std::abs(sx / draws) <= 3 * sigma);
  CHECK(std::abs(sy / draws) <= 3 * sigma);

  AtomicMeasure mu({Point(5, 0), Point(0, -3)}, {1, 1}, 0.1);
  int n = lattice_exponent_for(mu);
  CHECK(std::ldexp(1.0, n - 3) >= 5.0);
  CHECK(std::ldexp(1.0, n - 4) < 5.0);
}

TEST_CASE("terminal and transit squares") {
  DrawStream rng(17, 0);
  AtomicMeasure mu = random_measure(rng, 40, 1.0);
  auto lat = random_lattice(5, 0, 4, 2.0, 12);

  auto none = classify_squares(lat, DyadicSquareSet(), mu, 6);
  for (auto& s : none.squares) CHECK_FALSE(s.terminal);
  CHECK_FALSE(none.root_terminal);
  CHECK(none.uncovered_mass == doctest::Approx(mu.mass()));

  DyadicSquareSet all;
  all.insert(lat.root());
  auto full = classify_squares(lat, all, mu, 4);
  CHECK(full.root_terminal);
  for (auto& s : full.squares) CHECK(s.terminal);
  CHECK_THROWS_AS(MartingaleTree(mu, std::vector<Complex>(mu.size(), 1.0), lat, all, 4.0), std::invalid_argument);

  // Cover made of some squares at one level plus all children of another.
  DyadicSquareSet cover;
  DyadicSquare a = lat.square_of(mu.position(0), lat.root_level() - 3);
  cover.insert(a);
  DyadicSquare b = lat.square_of(mu.position(mu.size() - 1), lat.root_level() - 2);
  if (!b.is_ancestor_of(a) && !(b == a.ancestor_at(b.level)))
    for (auto& c : b.children()) cover.insert(c);
  auto labels = classify_squares(lat, cover, mu, 7);
  double mass_to_check = 0;
  for (auto& s : labels.squares) {
    // Oracle: every cell center of an 8 x 8 subdivision lies in some member.
    // Members are at most 8 times finer than the largest labeled square.
    Square g = lat.geometry(s.square);
    bool inside = true;
    for (int u = 0; u < 8; ++u)
      for (int v = 0; v < 8; ++v) {
        Point p = g.corner + Point((u + 0.5) * g.side / 8, (v + 0.5) * g.side / 8);
        bool hit = false;
        for (auto& m : cover.squares()) hit |= lat.geometry(m).contains_half_open(p);
        inside &= hit;
      }
    CHECK(s.terminal == inside);
    if (s.terminal)
      for (auto& t : labels.squares)
        if (s.square.is_ancestor_of(t.square)) CHECK(t.terminal);
    if (s.square.level == lat.root_level()) mass_to_check = s.mass;
  }
  CHECK(mass_to_check == doctest::Approx(mu.mass()));
}

TEST_CASE("martingale with b = 1 is the standard dyadic martingale") {
  DrawStream rng(18, 0);
  AtomicMeasure mu = random_measure(rng, 16, 1.0);
  auto lat = random_lattice(3, 0, 4, 2.0, 20);
  std::vector<Complex> one(mu.size(), 1.0);
  MartingaleTree tree(mu, one, lat, DyadicSquareSet(), 2.0);
  REQUIRE(tree.size() >= 1);
  auto f = random_values(rng, mu.size());
  for (std::size_t k = 0; k < tree.size(); ++k) {
    DyadicSquare q = tree.square(k);
    std::vector<Complex> want(mu.size(), 0.0);
    double mq = 0;
    Complex sq = 0;
    for (std::size_t i = 0; i < mu.size(); ++i)
      if (lat.contains(q, mu.position(i))) mq += mu.weight(i), sq += mu.weight(i) * f[i];
    for (std::size_t i = 0; i < mu.size(); ++i) {
      if (!lat.contains(q, mu.position(i))) continue;
      DyadicSquare c = lat.square_of(mu.position(i), q.level - 1);
      double mc = 0;
      Complex sc = 0;
      for (std::size_t j = 0; j < mu.size(); ++j)
        if (lat.contains(c, mu.position(j))) mc += mu.weight(j), sc += mu.weight(j) * f[j];
      want[i] = sc / mc - sq / mq;
    }
    auto got = tree.delta(k, f);
    for (std::size_t i = 0; i < mu.size(); ++i) CHECK(std::abs(got[i] - want[i]) <= 1e-13);
  }
  std::vector<std::vector<Complex>> samples;
  for (int s = 0; s < 20; ++s) samples.push_back(random_values(rng, mu.size()));
  auto r = norm_equivalence(tree, samples);
  CHECK(r.lower == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.upper == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.samples == 20);
}

TEST_CASE("martingale identities for accretive b") {
  DrawStream rng(19, 0);
  for (int inst = 0; inst < 10; ++inst) {
    AtomicMeasure mu = random_measure(rng, 16 + 4 * inst, 1.0);
    auto lat = random_lattice(19, inst, 4, 2.0, 20);
    auto b = accretive_b(rng, mu.size());
    DyadicSquareSet cover;
    if (inst % 2) cover.insert(lat.square_of(mu.position(inst), lat.root_level() - 3));
    MartingaleTree tree(mu, b, lat, cover, 4.0);
    CHECK(tree.min_b_mean() >= 0.25);
    auto f = random_values(rng, mu.size()), g = random_values(rng, mu.size());
    double nf = std::sqrt(tree.norm2(f));
    auto dec = martingale_decompose(tree, f);
    CHECK(dec.residual <= 1e-10);
    CHECK(dec.deltas.size() == tree.size());

    // Xi reproduces b; every Delta annihilates it.
    auto xb = tree.xi(b);
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(std::abs(xb[i] - b[i]) <= 1e-12);
    auto bd = martingale_decompose(tree, b);
    for (auto& d : bd.deltas)
      for (auto& v : d) CHECK(std::abs(v) <= 1e-12);

    auto xf = tree.xi(f);
    for (std::size_t k = 0; k < tree.size(); ++k) {
      auto d = tree.delta(k, f);
      CHECK(std::abs(tree.integral(d)) <= 1e-12 * nf * tree.mass());
      auto dd = tree.delta(k, d);
      for (std::size_t i = 0; i < d.size(); ++i) CHECK(std::abs(dd[i] - d[i]) <= 1e-12 * nf);
      auto xd = tree.xi(d);
      auto dx = tree.delta(k, xf);
      for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(std::abs(xd[i]) <= 1e-12 * nf);
        CHECK(std::abs(dx[i]) <= 1e-12 * nf);
      }
      std::size_t other = (k + 1) % tree.size();
      if (other != k) {
        auto cross = tree.delta(other, d);
        for (auto& v : cross) CHECK(std::abs(v) <= 1e-12 * nf);
      }
      Complex lhs = tree.pairing(d, g), rhs = tree.pairing(f, tree.delta_adjoint(k, g));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * nf * std::sqrt(tree.norm2(g)));
    }
    Complex lx = tree.pairing(xf, g), rx = tree.pairing(f, tree.xi_adjoint(g));
    CHECK(std::abs(lx - rx) <= 1e-12 * nf * std::sqrt(tree.norm2(g)));

    std::vector<std::vector<Complex>> samples;
    for (int s = 0; s < 100; ++s) samples.push_back(random_values(rng, mu.size()));
    auto r = norm_equivalence(tree, samples);
    CHECK(r.lower >= 0.01);
    CHECK(r.upper <= 100.0);
    MESSAGE("norm ratios [" << r.lower << ", " << r.upper << "] over " << tree.size() << " squares");
    auto rb = norm_equivalence(tree, {b});
    CHECK(rb.lower == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("paraaccretivity guard") {
  AtomicMeasure mu({Point(0, 0), Point(1, 0)}, {1, 1}, 0.1);
  auto lat = random_lattice(1, 0, 4, 2.0, 10);
  std::vector<Complex> b{Complex(1, 0), Complex(-1, 0)};
  CHECK_THROWS_AS(MartingaleTree(mu, b, lat, DyadicSquareSet(), 10.0), ParaaccretivityError);
  std::vector<Complex> ok{Complex(1, 0), Complex(0.5, 0)};
  CHECK_NOTHROW(MartingaleTree(mu, ok, lat, DyadicSquareSet(), 10.0));
}

TEST_CASE("Carleson imbedding examples") {
  AtomicMeasure mu({Point(0, 0), Point(0.5, 0.25)}, {1.0, 2.0}, 0.1);
  auto lat = random_lattice(2, 0, 4, 2.0, 10);
  std::vector<Complex> one(2, 1.0);
  auto r = carleson_check(lat, mu, {{lat.root(), mu.mass()}}, one);
  CHECK(r.lhs == doctest::Approx(mu.mass()));
  CHECK(r.c14 == doctest::Approx(1.0));
  CHECK(r.rhs == doctest::Approx(4 * mu.mass()));
  CHECK(r.holds);
  auto z = carleson_check(lat, mu, {{lat.root(), 0.0}}, one);
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs == 0.0);
  CHECK(z.holds);
  CHECK_THROWS_AS(carleson_check(lat, mu, {{lat.root(), -1.0}}, one), std::invalid_argument);
}

TEST_CASE("Carleson imbedding on random families") {
  DrawStream rng(20, 0);
  int violations = 0;
  for (int inst = 0; inst < 1000; ++inst) {
    AtomicMeasure mu = random_measure(rng, 12, 1.0);
    auto lat = random_lattice(20, inst, 4, 2.0, 12);
    std::vector<std::pair<DyadicSquare, double>> a;
    int count = 1 + static_cast<int>(rng.uniform() * 10);
    for (int k = 0; k < count; ++k) {
      std::size_t atom = static_cast<std::size_t>(rng.uniform() * mu.size());
      int level = lat.root_level() - static_cast<int>(rng.uniform() * 8);
      a.push_back({lat.square_of(mu.position(atom), level), rng.uniform(0, 2)});
    }
    auto f = random_values(rng, mu.size());
    auto r = carleson_check(lat, mu, a, f);
    violations += !r.holds;

    if (inst < 100) {
      // Oracle: packing ratio over family squares and their ancestors, masses by geometry.
      auto mass_of = [&](const DyadicSquare& q) {
        double m = 0;
        for (std::size_t i = 0; i < mu.size(); ++i)
          if (lat.geometry(q).contains_half_open(mu.position(i))) m += mu.weight(i);
        return m;
      };
      double c14 = 0, lhs = 0, nf = 0;
      for (auto& [q, v] : a)
        for (int lvl = q.level; lvl <= lat.root_level() + 2; ++lvl) {
          DyadicSquare r0 = q.ancestor_at(lvl);
          double m = mass_of(r0);
          if (m <= 0) continue;
          double s = 0;
          for (auto& [q2, v2] : a)
            if (q2 == r0 || r0.is_ancestor_of(q2)) s += v2;
          c14 = std::max(c14, s / m);
        }
      for (auto& [q, v] : a) {
        double m = mass_of(q);
        Complex s = 0;
        for (std::size_t i = 0; i < mu.size(); ++i)
          if (lat.geometry(q).contains_half_open(mu.position(i))) s += mu.weight(i) * f[i];
        if (m > 0) lhs += v * std::norm(s / m);
      }
      for (std::size_t i = 0; i < mu.size(); ++i) nf += mu.weight(i) * std::norm(f[i]);
      CHECK(r.c14 == doctest::Approx(c14).epsilon(1e-12));
      CHECK(r.lhs == doctest::Approx(lhs).epsilon(1e-12));
      CHECK(r.rhs == doctest::Approx(4 * c14 * nf).epsilon(1e-12));
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("Carleson imbedding for martingale differences of b") {
  DrawStream rng(21, 0);
  for (int inst = 0; inst < 20; ++inst) {
    AtomicMeasure mu = random_measure(rng, 24, 1.0);
    auto lat = random_lattice(21, inst, 4, 2.0, 16);
    MartingaleTree tree(mu, std::vector<Complex>(mu.size(), 1.0), lat, DyadicSquareSet(), 2.0);
    auto b = accretive_b(rng, mu.size());
    std::vector<std::pair<DyadicSquare, double>> a;
    for (std::size_t k = 0; k < tree.size(); ++k) {
      auto d = tree.delta(k, b);
      for (auto& c : tree.square(k).children()) {
        double s = 0;
        for (std::size_t i = 0; i < mu.size(); ++i)
          if (lat.contains(c, mu.position(i))) s += mu.weight(i) * std::norm(d[i]);
        if (s > 0) a.push_back({c, s});
      }
    }
    auto r = carleson_check(lat, mu, a, random_values(rng, mu.size()));
    CHECK(r.holds);
    CHECK(r.c14 <= 4 * 4.0);  // sum of |D b|^2 inside R is at most ||b chi_R||^2 <= 4 mu(R)
  }
}

TEST_CASE("bad square condition (a) threshold") {
  CHECK(bad_threshold(1, 4) == doctest::Approx(16 * std::pow(4.0, 0.75)).epsilon(1e-15));
  CHECK(bad_threshold(1, 4) == doctest::Approx(45.254834).epsilon(1e-7));
  CHECK_FALSE(50.0 <= bad_threshold(1, 4));
  CHECK(40.0 <= bad_threshold(1, 4));
}

TEST_CASE("is_bad agrees with brute-force enumeration") {
  DrawStream rng(22, 0);
  AtomicMeasure empty;
  int bad_a = 0, bad_b = 0, good = 0;
  for (int t = 0; t < 300; ++t) {
    AtomicMeasure mu = random_measure(rng, 30, 1.5);
    mu = AtomicMeasure({mu.positions().begin(), mu.positions().end()}, {mu.weights().begin(), mu.weights().end()},
                       1.0 / 64);
    auto lat1 = random_lattice(22, 2 * t, 5, 3.0, 14);
    auto lat2 = random_lattice(22, 2 * t + 1, 5, 3.0, 14);
    int m = 1 + t % 5;
    double M = rng.uniform(1, 60);
    DyadicSquare q = lat1.square_of(mu.position(t % mu.size()), lat1.root_level() - 1 - t % 6);
    auto got = is_bad(q, lat1, lat2, m, M, mu);
    auto want = oracle_bad(q, lat1, lat2, m, M, mu);
    CHECK(got.bad == want.bad);
    CHECK(got.reason == want.reason);
    if (!got.bad) ++good;
    else (got.reason == 'a' ? bad_a : bad_b) += 1;
    // Condition (b) cannot fire without mass.
    auto e = is_bad(q, lat1, lat2, m, M, empty);
    CHECK((!e.bad || e.reason == 'a'));
  }
  MESSAGE("verdicts: good " << good << ", bad(a) " << bad_a << ", bad(b) " << bad_b);
  CHECK(good > 0);
  CHECK(bad_a > 0);
  CHECK(bad_b > 0);
}

TEST_CASE("boundary negligibility") {
  Square r{Point(0, 0), 1.0};
  AtomicMeasure on_edge({Point(0.5, 0), Point(0.5, 0.5)}, {1.0, 1.0}, 0.01);
  CHECK_FALSE(boundary_negligible(on_edge, r, 10.0, 0.01));
  CHECK(boundary_negligible(on_edge, r, 100.0, 0.01));
  CHECK(boundary_negligible(AtomicMeasure(), r, 0.1, 0.0));
  DrawStream rng(23, 0);
  for (int t = 0; t < 200; ++t) {
    AtomicMeasure mu = random_measure(rng, 15, 1.5);
    double M = rng.uniform(0.5, 40), fl = rng.uniform(0.001, 0.1);
    CHECK(boundary_negligible(mu, r, M, fl) == oracle_negligible(mu, r, M, fl));
  }
}

TEST_CASE("bad probability Monte Carlo") {
  auto w = wilson_interval(30, 100);
  auto o = oracle::wilson(30, 100);
  CHECK(w.lo == doctest::Approx(o.first).epsilon(1e-14));
  CHECK(w.hi == doctest::Approx(o.second).epsilon(1e-14));

  DrawStream rng(24, 0);
  AtomicMeasure mu = random_measure(rng, 40, 1.0);
  mu = AtomicMeasure({mu.positions().begin(), mu.positions().end()}, {mu.weights().begin(), mu.weights().end()},
                     1.0 / 32);
  auto lat1 = random_lattice(24, 0, 4, 2.0, 12);
  DyadicSquare q = lat1.square_of(mu.position(0), lat1.root_level() - 3);
  TbConfig cfg;
  cfg.trials = 200;
  cfg.seed = 5;
  cfg.M = 40;
  std::vector<BadProbability> est;
  for (int m = 1; m <= 4; ++m) {
    cfg.m = m;
    est.push_back(bad_probability_mc(q, lat1, mu, 2.0, cfg));
    MESSAGE("m=" << m << " estimate " << est.back().estimate << " [" << est.back().ci.lo << ", " << est.back().ci.hi
                 << "]");
  }
  for (std::size_t k = 1; k < est.size(); ++k) CHECK(est[k].estimate <= est[k - 1].ci.hi);
  cfg.m = 3;
  auto again = bad_probability_mc(q, lat1, mu, 2.0, cfg);
  CHECK(again.bad == est[2].bad);
  for (std::size_t t = 0; t < again.rows.size(); ++t) CHECK(again.rows[t].w == est[2].rows[t].w);
  CHECK(mc_csv(again.rows).rfind("trial,seed,w_x,w_y,observable\n", 0) == 0);

  // A scale gap beyond the top of the lattice leaves only the boundary test,
  // which a small mass cannot fail.
  cfg.m = 20;
  cfg.M = 1e6;
  auto far = bad_probability_mc(q, lat1, mu, 2.0, cfg);
  CHECK(far.estimate == 0.0);
}

TEST_CASE("tb configuration validation") {
  TbConfig cfg;
  CHECK(cfg.beta_value() == doctest::Approx(0.0625));
  cfg.m = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = TbConfig();
  cfg.delta2 = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = TbConfig();
  cfg.M = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("G-set trivial ensembles") {
  DrawStream rng(25, 0);
  AtomicMeasure F = random_measure(rng, 20, 1.0);
  TbConfig cfg;
  cfg.trials = 40;
  auto none = g_set_estimate(
      F, [&](std::size_t, const DyadicLattice&) { return std::vector<char>(F.size(), 0); }, 4, 2.0, cfg);
  CHECK(none.hypothesis_met);
  CHECK(none.mass_g == doctest::Approx(F.mass()));
  for (std::size_t a = 0; a < F.size(); ++a) {
    CHECK(none.p1[a] == 1.0);
    CHECK(none.in_g[a]);
    CHECK(none.phi(F.position(a)) == 0.0);
  }

  auto one = g_set_estimate(
      F,
      [&](std::size_t, const DyadicLattice&) {
        std::vector<char> w(F.size(), 0);
        w[3] = 1;
        return w;
      },
      4, 2.0, cfg);
  CHECK(one.p1[3] == 0.0);
  CHECK_FALSE(one.in_g[3]);
  CHECK(one.phi(F.position(3)) > 0.0);

  auto all = g_set_estimate(
      F, [&](std::size_t, const DyadicLattice&) { return std::vector<char>(F.size(), 1); }, 4, 2.0, cfg);
  CHECK_FALSE(all.hypothesis_met);
  CHECK(all.mass_g == 0.0);

  cfg.trials = 10;
  CHECK_THROWS_AS(g_set_estimate(
                      F, [&](std::size_t, const DyadicLattice&) { return std::vector<char>(F.size(), 0); }, 4, 2.0,
                      cfg),
                  std::invalid_argument);
}

TEST_CASE("G-set chain on a synthetic ensemble") {
  DrawStream rng(26, 0);
  AtomicMeasure F = random_measure(rng, 60, 1.0);
  TbConfig cfg;
  cfg.trials = 60;
  cfg.delta2 = 0.5;
  cfg.seed = 9;
  // W_D: random squares of the trial's lattice, added while the mass stays <= 0.3 mu(F).
  auto oracle_w = [&](std::size_t trial, const DyadicLattice& lat) {
    DrawStream r(1234, trial);
    std::vector<char> in(F.size(), 0);
    double mass = 0;
    for (int k = 0; k < 40; ++k) {
      std::size_t atom = static_cast<std::size_t>(r.uniform() * F.size());
      DyadicSquare q = lat.square_of(F.position(atom), lat.root_level() - 3 - static_cast<int>(r.uniform() * 3));
      double add = 0;
      for (std::size_t a = 0; a < F.size(); ++a)
        if (!in[a] && lat.contains(q, F.position(a))) add += F.weight(a);
      if (mass + add > 0.3 * F.mass()) continue;
      mass += add;
      for (std::size_t a = 0; a < F.size(); ++a)
        if (lat.contains(q, F.position(a))) in[a] = 1;
    }
    return in;
  };
  auto g = g_set_estimate(F, oracle_w, 4, 2.0, cfg);
  CHECK(g.hypothesis_met);
  CHECK(g.max_w_fraction <= 0.3);
  CHECK(g.bound == doctest::Approx(F.mass() / 3));
  CHECK(g.mass_g >= g.bound);
  CHECK(g.bound_holds);

  // Oracle for p1 and the pair probability.
  for (std::size_t a = 0; a < F.size(); ++a) {
    int outside = 0;
    for (std::size_t t = 0; t < g.in_w.size(); ++t) outside += !g.in_w[t][a];
    double p1 = double(outside) / double(g.in_w.size());
    CHECK(g.p1[a] == p1);
    CHECK(g.pair_probability(a) == doctest::Approx(p1 * p1).epsilon(1e-14));
    if (g.in_g[a]) CHECK(g.phi(F.position(a)) == 0.0);
  }
  for (int s = 0; s < 20; ++s) {
    Point a(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)), b(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5));
    double prev = g.phi(a);
    Point last = a;
    for (int k = 1; k <= 10; ++k) {
      Point p = a + (b - a) * (k / 10.0);
      double v = g.phi(p);
      CHECK(std::abs(v - prev) <= std::abs(p - last) * (1 + 1e-12) + 1e-15);
      prev = v;
      last = p;
    }
  }
}
