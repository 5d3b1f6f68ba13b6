#include <algorithm>
#include <cmath>
#include <ostream>

#include "cli.hpp"
#include "commands.hpp"
#include "curvcap/fml/exceptional.hpp"
#include "curvcap/tb/bad_squares.hpp"
#include "curvcap/tb/carleson.hpp"
#include "curvcap/tb/g_set.hpp"
#include "curvcap/tb/lattice.hpp"
#include "curvcap/tb/martingale.hpp"
#include "curvcap/util/rng.hpp"

namespace curvcap::cli {

namespace {

constexpr int kSamples = 16;
constexpr int kCarlesonInstances = 100;
constexpr int kPhiSegments = 20;

// Stream tags so that each sampled quantity has its own replayable draws.
enum Stream : std::uint32_t { kF = 11, kG = 12, kCarlesonA = 13, kCarlesonF = 14, kPhi = 15 };

Json num(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

std::vector<Complex> random_values(std::uint64_t seed, std::uint64_t index, Stream s, std::size_t n) {
  DrawStream r(seed, index, s);
  std::vector<Complex> v(n);
  for (auto& x : v) {
    double re = r.uniform(-1.0, 1.0);
    x = Complex(re, r.uniform(-1.0, 1.0));
  }
  return v;
}

double max_abs_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const std::vector<Complex>& a) {
  double m = 0.0;
  for (const auto& v : a) m = std::max(m, std::abs(v));
  return m;
}

// Levels below the root needed to separate atoms at the measure's resolution.
int depth_for(const AtomicMeasure& mu, int N) {
  const int root = N + 1;
  const int finest = static_cast<int>(std::floor(std::log2(mu.resolution()))) - 2;
  return std::clamp(root - finest, 1, 60);
}

std::vector<Complex> density(const AtomicMeasure& mu, const ComplexAtomicMeasure& nu) {
  if (nu.size() != mu.size()) throw std::invalid_argument("nu must live on the atoms of mu");
  std::vector<Complex> b(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (nu.position(i) != mu.position(i)) throw std::invalid_argument("nu must live on the atoms of mu");
    if (!(mu.weight(i) > 0.0)) throw std::invalid_argument("mu has an atom of zero weight");
    b[i] = nu.weight(i) / mu.weight(i);
  }
  return b;
}

Json martingale_section(const MartingaleTree& tree, const std::vector<Complex>& b, std::uint64_t seed) {
  const std::size_t n = tree.atom_count();
  double residual = 0.0, idempotent = 0.0, orthogonal = 0.0, mean_zero = 0.0, xi_kills = 0.0, b_fixed = 0.0,
         b_killed = 0.0, adjoint = 0.0;
  std::vector<std::vector<Complex>> samples;
  for (int s = 0; s < kSamples; ++s) samples.push_back(random_values(seed, s, kF, n));
  {
    auto xb = tree.xi(b);
    b_fixed = max_abs_diff(xb, b);
    for (std::size_t k = 0; k < tree.size(); ++k) b_killed = std::max(b_killed, max_abs(tree.delta(k, b)));
  }
  for (int s = 0; s < 2; ++s) {
    const auto& f = samples[s];
    auto g = random_values(seed, s, kG, n);
    const double nf = std::sqrt(tree.norm2(f)), ng = std::sqrt(tree.norm2(g));
    residual = std::max(residual, martingale_decompose(tree, f).residual);
    auto xf = tree.xi(f);
    for (std::size_t k = 0; k < tree.size(); ++k) {
      auto d = tree.delta(k, f);
      idempotent = std::max(idempotent, max_abs_diff(tree.delta(k, d), d) / nf);
      mean_zero = std::max(mean_zero, std::abs(tree.integral(d)) / (nf * tree.mass()));
      xi_kills = std::max(xi_kills, std::max(max_abs(tree.xi(d)), max_abs(tree.delta(k, xf))) / nf);
      if (tree.size() > 1) orthogonal = std::max(orthogonal, max_abs(tree.delta((k + 1) % tree.size(), d)) / nf);
      Complex lhs = tree.pairing(d, g), rhs = tree.pairing(f, tree.delta_adjoint(k, g));
      adjoint = std::max(adjoint, std::abs(lhs - rhs) / (nf * ng));
    }
  }
  NormRatios r = norm_equivalence(tree, samples);
  return {{"squares", tree.size()},
          {"min_b_mean", num(tree.min_b_mean())},
          {"reconstruction_residual", num(residual)},
          {"identities",
           {{"xi_b_minus_b", num(b_fixed)},
            {"delta_b", num(b_killed)},
            {"delta_idempotent", num(idempotent)},
            {"delta_orthogonal", num(orthogonal)},
            {"delta_mean_zero", num(mean_zero)},
            {"xi_delta", num(xi_kills)},
            {"adjoint_pairing", num(adjoint)}}},
          {"norm_equivalence", {{"lower", num(r.lower)}, {"upper", num(r.upper)}, {"samples", r.samples}}}};
}

Json carleson_section(const MartingaleTree& tree, const AtomicMeasure& mu, const DyadicLattice& lat,
                      std::uint64_t seed) {
  std::vector<double> masses(tree.size(), 0.0);
  for (std::size_t k = 0; k < tree.size(); ++k)
    for (std::size_t i = 0; i < mu.size(); ++i)
      if (lat.contains(tree.square(k), mu.position(i))) masses[k] += mu.weight(i);
  double c14 = 0.0, worst = 0.0;
  int violations = 0;
  for (int t = 0; t < kCarlesonInstances; ++t) {
    DrawStream r(seed, t, kCarlesonA);
    std::vector<std::pair<DyadicSquare, double>> a;
    for (std::size_t k = 0; k < tree.size(); ++k) a.push_back({tree.square(k), r.uniform() * masses[k]});
    auto res = carleson_check(lat, mu, a, random_values(seed, t, kCarlesonF, mu.size()));
    c14 = std::max(c14, res.c14);
    if (res.rhs > 0.0) worst = std::max(worst, res.lhs / res.rhs);
    violations += !res.holds;
  }
  return {{"instances", kCarlesonInstances},
          {"max_c14", num(c14)},
          {"max_lhs_over_rhs", num(worst)},
          {"violations", violations}};
}

Json bad_section(const AtomicMeasure& mu, const DyadicLattice& lat, double radius, const TbOptions& opt) {
  DyadicSquare q = lat.square_of(mu.position(0), lat.root_level() - 3);
  std::vector<int> ms{1, 2, 3, 4};
  if (std::find(ms.begin(), ms.end(), opt.m) == ms.end()) ms.push_back(opt.m);
  Json rows = Json::array();
  std::vector<BadProbability> est;
  for (int m : ms) {
    TbConfig cfg;
    cfg.m = m;
    cfg.M = opt.M;
    cfg.trials = opt.trials;
    cfg.seed = opt.seed;
    est.push_back(bad_probability_mc(q, lat, mu, radius, cfg));
    const auto& e = est.back();
    rows.push_back({{"m", m},
                    {"bad", e.bad},
                    {"trials", e.trials},
                    {"estimate", num(e.estimate)},
                    {"ci_lo", num(e.ci.lo)},
                    {"ci_hi", num(e.ci.hi)},
                    {"by_a", e.by_a},
                    {"by_b", e.by_b}});
  }
  // Non-increasing within CIs over the sweep 1..4.
  bool monotone = true;
  for (std::size_t k = 1; k < 4; ++k) monotone = monotone && est[k].estimate <= est[k - 1].ci.hi;
  return {{"square", {{"level", q.level}, {"i", q.i}, {"j", q.j}}},
          {"M", opt.M},
          {"sweep", rows},
          {"non_increasing_within_ci", monotone}};
}

Json g_section(const AtomicMeasure& mu, const ComplexAtomicMeasure& nu, int N, double radius, const TbOptions& opt) {
  HSet h = build_H(mu, opt.c0);
  auto oracle = [&](std::size_t, const DyadicLattice& lat) {
    HDSet hd = build_HD(h, lat);
    DyadicFamily td = build_TD(mu, nu, lat, opt.c_d);
    std::vector<char> in(mu.size(), 0);
    for (std::size_t i = 0; i < mu.size(); ++i) in[i] = hd.contains(mu.position(i)) || td.contains(mu.position(i));
    return in;
  };
  TbConfig cfg;
  cfg.trials = std::max(opt.trials, 30);
  cfg.seed = opt.seed;
  GSetEstimate g = g_set_estimate(mu, oracle, N, radius, cfg);
  double phi_on_g = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (g.in_g[i]) phi_on_g = std::max(phi_on_g, g.phi(mu.position(i)));
  // Largest |Phi(p) - Phi(p')| / |p - p'| over steps of sampled segments.
  double lip = 0.0;
  for (int s = 0; s < kPhiSegments; ++s) {
    DrawStream r(opt.seed, s, kPhi);
    Point a(r.uniform(-radius, radius), r.uniform(-radius, radius));
    Point b(r.uniform(-radius, radius), r.uniform(-radius, radius));
    Point last = a;
    double prev = g.phi(a);
    for (int k = 1; k <= 10; ++k) {
      Point p = a + (b - a) * (k / 10.0);
      double v = g.phi(p);
      if (std::abs(p - last) > 0.0) lip = std::max(lip, std::abs(v - prev) / std::abs(p - last));
      prev = v;
      last = p;
    }
  }
  return {{"trials", cfg.trials},
          {"delta2", cfg.delta2},
          {"mass_F", num(g.mass_f)},
          {"mass_G", num(g.mass_g)},
          {"bound", num(g.bound)},
          {"max_w_fraction", num(g.max_w_fraction)},
          {"hypothesis_met", g.hypothesis_met},
          {"bound_holds", g.bound_holds},
          {"max_phi_on_G", num(phi_on_g)},
          {"phi_lipschitz", num(lip)}};
}

}  // namespace

int cmd_tb(const TbOptions& opt, CommandRecord& rec, std::ostream& out, std::ostream& err) {
  rec.inputs.push_back(opt.measure);
  AtomicMeasure mu = measure_from_json(read_json_file(opt.measure));
  if (mu.empty()) throw std::invalid_argument("measure has no atoms");
  ComplexAtomicMeasure nu = ComplexAtomicMeasure::from_positive(mu);
  if (opt.nu) {
    rec.inputs.push_back(*opt.nu);
    nu = complex_measure_from_json(read_json_file(*opt.nu));
  }
  std::vector<Complex> b = density(mu, nu);
  TbConfig check;
  check.m = opt.m;
  check.M = opt.M;
  check.trials = opt.trials;
  check.validate();
  if (!(opt.c_d > 1.0)) throw std::invalid_argument("C_d must exceed 1");

  rec.seed = opt.seed;
  rec.config = {{"trials", opt.trials}, {"m", opt.m}, {"M", opt.M}, {"C_d", opt.c_d}, {"C0", opt.c0}};

  const int N = lattice_exponent_for(mu);
  const double radius = std::ldexp(1.0, N - 3);
  DyadicLattice lat = random_lattice(opt.seed, 0, N, radius, depth_for(mu, N));

  Json report;
  report["config"] = rec.config;
  report["seed"] = opt.seed;
  report["atoms"] = mu.size();
  report["lattice"] = {{"N", N}, {"depth", lat.depth}, {"w", {lat.w.real(), lat.w.imag()}}};

  // Stopping squares: H_D from the non-Ahlfors disks and T_D where |nu| is small.
  DyadicSquareSet cover;
  HSet h = build_H(mu, opt.c0);
  for (const auto& q : build_HD(h, lat).squares) cover.insert(q);
  DyadicFamily td = build_TD(mu, nu, lat, opt.c_d);
  for (const auto& q : td.squares) cover.insert(q);
  report["cover_squares"] = cover.size();

  int code = kExitOk;
  try {
    // A root in T_D means |nu(C)| <= mu(C) / C_d: b fails at the top scale.
    if (std::find(td.squares.begin(), td.squares.end(), lat.root()) != td.squares.end())
      throw ParaaccretivityError("|nu| <= mu / C_d on the top square");
    MartingaleTree tree(mu, b, lat, cover, opt.c_d);
    report["paraaccretive"] = true;
    report["martingale"] = martingale_section(tree, b, opt.seed);
    report["carleson"] = carleson_section(tree, mu, lat, opt.seed);
  } catch (const ParaaccretivityError& e) {
    report["paraaccretive"] = false;
    report["error"] = e.what();
    err << "error: paraaccretivity violated: " << e.what() << "\n";
    code = kExitParaaccretive;
  }
  if (code == kExitOk) {
    report["bad_squares"] = bad_section(mu, lat, radius, opt);
    report["g_set"] = g_section(mu, nu, N, radius, opt);
  }
  if (opt.out)
    emit(rec, *opt.out, dump_json(report));
  else
    out << dump_json(report);
  return code;
}

}  // namespace curvcap::cli
