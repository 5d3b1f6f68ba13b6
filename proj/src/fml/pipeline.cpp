#include "curvcap/fml/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "curvcap/capacity/diagnostics.hpp"
#include "curvcap/kernels/cauchy.hpp"
#include "curvcap/kernels/maximal.hpp"
#include "curvcap/tb/lattice.hpp"
#include "curvcap/util/parallel.hpp"

namespace curvcap {

void PipelineConfig::validate() const {
  if (lambda && !(*lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(C0 > 0.0)) throw std::invalid_argument("C0 must be positive");
  if (!(C_d > 1.0)) throw std::invalid_argument("C_d must exceed 1");
  if (alpha_S && !(*alpha_S > 0.0)) throw std::invalid_argument("alpha_S must be positive");
  if (rho && !(*rho > 0.0)) throw std::invalid_argument("rho must be positive");
  if (quad_cells < 8) throw std::invalid_argument("quad_cells must be >= 8");
  if (tamt_samples < 1) throw std::invalid_argument("tamt_samples must be >= 1");
}

Json PipelineConfig::to_json() const {
  Json j;
  j["lambda"] = lambda ? Json(*lambda) : Json(nullptr);
  j["C0"] = C0;
  j["C_d"] = C_d;
  j["alpha_S"] = alpha_S ? Json(*alpha_S) : Json(nullptr);
  j["rho"] = rho ? Json(*rho) : Json(nullptr);
  j["seed"] = seed;
  j["quad_cells"] = quad_cells;
  j["tamt_samples"] = tamt_samples;
  j["optimizer"] = {{"max_iterations", optimizer.max_iterations}, {"tolerance", optimizer.tolerance},
                    {"epsilon", optimizer.epsilon}, {"polish", optimizer.polish}};
  return j;
}

const ReportItem* PipelineResult::item(const std::string& name) const {
  for (const auto& it : items)
    if (it.name == name) return &it;
  return nullptr;
}

namespace {

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(v > 0 ? "inf" : (v < 0 ? "-inf" : "nan")); }

template <class F>
auto stage(PipelineResult& out, const std::string& name, F&& body) {
  try {
    if constexpr (std::is_void_v<decltype(body())>) {
      body();
      out.stages_done.push_back(name);
    } else {
      auto v = body();
      out.stages_done.push_back(name);
      return v;
    }
  } catch (const PipelineStageError&) {
    throw;
  } catch (const std::exception& ex) {
    throw PipelineStageError(name, ex.what());
  }
}

void add(PipelineResult& out, std::string name, double left, double right, std::string status, std::string note = {}) {
  out.items.push_back({std::move(name), left, right, std::move(status), std::move(note)});
}

std::string pf(bool ok) { return ok ? "pass" : "fail"; }

// Raster cell centers of the Omega grid inside the closed ball, capped.
void raster_points_in(const RasterOpenSet& om, const Ball& b, std::vector<Point>& pts, std::size_t cap) {
  auto lo = om.cell_of(b.center - Point(b.radius, b.radius));
  auto hi = om.cell_of(b.center + Point(b.radius, b.radius));
  for (std::int64_t i = lo.first; i <= hi.first && pts.size() < cap; ++i)
    for (std::int64_t j = lo.second; j <= hi.second && pts.size() < cap; ++j) {
      Point c = om.cell_center(i, j);
      if (contains_closed(b, c)) pts.push_back(c);
    }
}

void verify(PipelineResult& out, const PipelineConfig& cfg) {
  const auto& w = out.whitney;
  const auto& om = w.omega;
  const auto& mu = out.munu.mu;
  const auto& nu = out.munu.nu;
  const auto& sets = out.sets;

  // Whitney invariants, decided on raster cells.
  {
    std::vector<int> cover(static_cast<std::size_t>(om.nx()) * om.ny(), 0);
    bool disjoint = true, contain = true, reach = true;
    for (const auto& q : w.squares) {
      const std::int64_t s = std::int64_t{1} << q.level;
      for (std::int64_t a = q.i * s; a < (q.i + 1) * s; ++a)
        for (std::int64_t b = q.j * s; b < (q.j + 1) * s; ++b) {
          if (a < 0 || b < 0 || a >= om.nx() || b >= om.ny()) {
            disjoint = false;
            continue;
          }
          if (++cover[static_cast<std::size_t>(a) * om.ny() + b] > 1) disjoint = false;
        }
      auto c20 = w.dilate_cells(q, w.contain_factor);
      if (!om.all_set(c20[0], c20[1], c20[2], c20[3])) contain = false;
      auto c60 = w.dilate_cells(q, w.reach_factor);
      if (om.count_in(c60[0], c60[1], c60[2], c60[3]) == (c60[1] - c60[0]) * (c60[3] - c60[2])) reach = false;
    }
    add(out, "whitney_disjoint", static_cast<double>(w.squares.size()), 0, pf(disjoint), "interiors pairwise disjoint");
    add(out, "whitney_20Q_in_omega", w.contain_factor, 0, pf(contain), "every 20Q inside Omega");
    add(out, "whitney_60Q_meets_complement", w.reach_factor, 0, pf(reach), "every 60Q meets the complement");
    add(out, "whitney_overlap", w.overlap, 50, w.overlap > 0 ? "record" : "fail", "max sum of chi_10Q");
    add(out, "whitney_uncovered_cells", static_cast<double>(w.uncovered_cells), static_cast<double>(om.count()),
        "record", "Omega cells in no square");
  }

  const double muF = mu.mass();
  const double gammaE = std::abs(out.surrogate.nu0.total());
  const double nuF = std::abs(nu.total());

  {
    std::size_t inside = 0;
    const auto& ea = out.surrogate.arclength;
    for (std::size_t a = 0; a < ea.size(); ++a)
      for (std::size_t k : out.F)
        if (w.squares[k].geom.contains_closed(ea.position(a))) {
          ++inside;
          break;
        }
    add(out, "(a) E in F", static_cast<double>(inside), static_cast<double>(ea.size()), pf(inside == ea.size()),
        "atoms of E inside some Q_i");
    double sum_gamma = 0.0, max_diam = 0.0;
    for (std::size_t k = 0; k < out.F.size(); ++k) {
      sum_gamma += out.gamma[k];
      max_diam = std::max(max_diam, std::sqrt(2.0) * w.squares[out.F[k]].geom.side);
    }
    add(out, "(b) sum gamma(E cap 2Q_i) / g(E)", sum_gamma, out.sigma_estimate.g_value, "record");
    add(out, "(c) max diam(Q_i) vs diam(E)/10", max_diam, out.e.diameter() / 10.0, "record");
  }
  add(out, "(d) mu(F) vs gamma(E)", muF, gammaE, "record", "gamma(E) is the surrogate mass nu0(E)");
  add(out, "(e) b_max", out.munu.b_max, 0, std::isfinite(out.munu.b_max) ? "record" : "fail");
  add(out, "(f) |nu(F)| vs nu0(E)", nuF, gammaE, pf(out.munu.conservation_error <= 1e-10),
      "relative error " + std::to_string(out.munu.conservation_error));
  {
    double g = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i)
      if (!sets.HD.contains(mu.position(i))) g += out.cstar[i] * mu.weight(i);
    add(out, "(g) int over F minus H_D of C_* nu dmu", g, muF, "record");
  }
  {
    bool ok = true;
    for (std::size_t i = 0; i < mu.size() && ok; ++i) {
      const double R = sets.H.ahlfors[i];
      if (!(R > 0.0)) continue;
      const Point x = mu.position(i);
      if (!sets.HD.contains(x)) ok = false;
      for (int t = 0; t < 16 && ok; ++t)
        if (!sets.HD.contains(x + std::polar(R, 2.0 * M_PI * t / 16.0))) ok = false;
    }
    add(out, "(h) non-Ahlfors disks inside H_D", static_cast<double>(sets.H.centers.size()), 0, pf(ok));
  }
  {
    bool ok = true;
    std::size_t samples = 0;
    for (const auto& b : sets.H.balls) {
      std::vector<Point> pts{b.center};
      for (double f : {0.5, 1.0})
        for (int t = 0; t < 16; ++t) pts.push_back(b.center + std::polar(f * b.radius, 2.0 * M_PI * t / 16.0));
      raster_points_in(om, b, pts, 100000);
      for (const auto& p : pts) ok = ok && sets.HD.contains(p);
      samples += pts.size();
    }
    add(out, "H subset H_D", static_cast<double>(samples), 0, pf(ok), "sampled points of H");
  }
  add(out, "sum R(x_h) <= mu(F)/C0", sets.H.sum_R, sets.H.bound, pf(sets.H.bound_holds));
  add(out, "sum l(R_k) <= 80 sum R(x_h)", sets.HD.total_side, sets.HD.bound, pf(sets.HD.bound_holds));
  add(out, "(i) sum l(R_k) vs mu(F)", sets.HD.total_side, muF, "record");
  {
    Complex vh(0, 0);
    double mh = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i)
      if (sets.HD.contains(mu.position(i))) {
        vh += nu.weight(i);
        mh += mu.weight(i);
      }
    add(out, "(j) |nu(H_D)| vs |nu(F)|", std::abs(vh), nuF, "record");
    add(out, "(k) mu(H_D) vs mu(F)", mh, muF, "record");
  }
  {
    const double floor_side = 4.0 * mu.resolution();
    const double r1 = clcl_ratio(nu, out.lattice, floor_side);
    const double r2 = clcl_ratio(nu, out.lattice2, floor_side);
    const bool ok = std::isfinite(r1) && std::isfinite(r2) && std::abs(r1 - r2) <= 0.2 * std::max(r1, r2);
    add(out, "clcl max |nu(R)|/l(R), two lattices", r1, r2, pf(ok), "squares with side >= 4 resolution(mu)");
  }
  {
    std::vector<Point> ys;
    const std::size_t cap = 4000;
    for (std::size_t b = 0; b < sets.S.balls.size() && ys.size() < cap; ++b) {
      const Ball& ball = sets.S.balls[b];
      ys.push_back(ball.center);
      for (double f : {1.0 / 3.0, 2.0 / 3.0})
        for (int t = 0; t < cfg.tamt_samples; ++t)
          ys.push_back(ball.center + std::polar(f * ball.radius, 2.0 * M_PI * t / cfg.tamt_samples));
      raster_points_in(om, {ball.center, ball.radius * (1.0 - 1e-12)}, ys, cap);
    }
    std::vector<Point> keep;
    for (const auto& y : ys)
      if (sets.S.contains(y) && !sets.HD.contains(y)) keep.push_back(y);
    std::vector<double> v(keep.size());
    parallel_for(keep.size(), [&](std::size_t k) { v[k] = cauchy_maximal(nu, keep[k]); });
    const double rhs = out.alpha_S - 8.0 * cfg.C0 * out.munu.b_max;
    double lo = INFINITY;
    bool ok = true;
    for (double c : v) {
      lo = std::min(lo, c);
      ok = ok && c > rhs;
    }
    add(out, "tamt min C_* nu on S minus H_D", lo, rhs, pf(ok), std::to_string(keep.size()) + " samples");
  }
  {
    const auto& sigma = out.sigma_estimate.sigma;
    double lo = INFINITY;
    std::size_t n = 0, bad = 0;
    for (std::size_t k = 0; k < out.F.size(); ++k) {
      const Square q2 = w.squares[out.F[k]].geom.dilate(2.0), q4 = w.squares[out.F[k]].geom.dilate(4.0);
      std::vector<std::size_t> in4;
      for (std::size_t a = 0; a < sigma.size(); ++a)
        if (q4.contains_closed(sigma.position(a))) in4.push_back(a);
      const AtomicMeasure local = sigma.restricted(in4);
      for (std::size_t a = 0; a < sigma.size(); ++a) {
        if (!q2.contains_closed(sigma.position(a))) continue;
        const double u = potential_U(local, sigma.position(a), 0.0);
        lo = std::min(lo, u);
        ++n;
        if (!(u > out.alpha / 4.0)) ++bad;
      }
    }
    add(out, "1qaz min U_{sigma|4Q_i} on E cap 2Q_i", lo, out.alpha / 4.0, "record",
        std::to_string(bad) + " of " + std::to_string(n) + " samples at or below alpha/4");
  }
  {
    PartitionOfUnity pu(w);
    double worst = 0.0, gap = 0.0;
    for (std::size_t k : out.F) {
      const Square q = w.squares[k].geom;
      BumpFunction g = [&](const Point& x) -> std::pair<double, Point> {
        if (!q.dilate(2.0).contains_closed(x)) return {0.0, Point(0, 0)};
        try {
          for (const auto& t : pu.at(x))
            if (t.square == k) return {t.weight, t.gradient};
        } catch (const std::invalid_argument&) {
        }
        return {0.0, Point(0, 0)};
      };
      auto vb = vitushkin_localize(out.surrogate, g, q.dilate(2.0), q.dilate(4.0), cfg.quad_cells);
      worst = std::max(worst, vb.max_modulus);
      gap = std::max(gap, vb.max_discrepancy);
    }
    std::ostringstream note;
    note << "max |formula - direct| " << gap;
    add(out, "vitushkin sampled |C(g_i nu0)|", worst, 0, std::isfinite(worst) ? "record" : "fail", note.str());
  }
  add(out, "lambda vs alpha", out.lambda, out.alpha, "record", "the 1e-8 alpha ceiling is not enforced");
  add(out, "circles clamped to side/4", static_cast<double>(out.munu.clamped), static_cast<double>(out.F.size()),
      "record");
  add(out, "nu0 mass outside the partition", out.munu.uncovered_nu0, gammaE, "record");
}

}  // namespace

double clcl_ratio(const ComplexAtomicMeasure& nu, const DyadicLattice& lat, double min_side) {
  double best = 0.0;
  for (int lvl = lat.root_level(); lat.side(lvl) >= min_side; --lvl) {
    std::map<std::pair<std::int64_t, std::int64_t>, Complex> acc;
    for (std::size_t i = 0; i < nu.size(); ++i) {
      DyadicSquare q = lat.square_of(nu.position(i), lvl);
      acc[{q.i, q.j}] += nu.weight(i);
    }
    for (const auto& [key, v] : acc) best = std::max(best, std::abs(v) / lat.side(lvl));
  }
  return best;
}

void run_pipeline(const SegmentFamily& e, const PipelineConfig& cfg, PipelineResult& out) {
  cfg.validate();
  if (e.segments.empty()) throw std::invalid_argument("segment family is empty");
  e.validate();
  out = PipelineResult{};
  out.e = e;

  out.surrogate = stage(out, "surrogate", [&] { return surrogate_nu0(e); });
  stage(out, "sigma", [&] {
    out.sigma_estimate = optimize_gplus(out.surrogate.arclength, cfg.optimizer);
    auto u = atom_potentials(out.sigma_estimate.sigma, cfg.optimizer.epsilon);
    out.alpha = *std::min_element(u.begin(), u.end());
    out.lambda = cfg.lambda ? *cfg.lambda : out.alpha / 2.0;
    if (!(out.lambda > 0.0)) throw std::invalid_argument("level lambda is not positive");
  });
  stage(out, "omega", [&] {
    const auto& sigma = out.sigma_estimate.sigma;
    out.rho = cfg.rho ? *cfg.rho : sigma.resolution() / 4.0;
    RasterOpenSet om = level_set_omega(sigma, out.lambda, out.rho);
    if (om.empty()) throw std::invalid_argument("Omega is empty");
    out.whitney.omega = om;
  });
  stage(out, "whitney", [&] {
    out.whitney = whitney(out.whitney.omega);
    if (out.whitney.empty()) throw std::invalid_argument("no Whitney squares");
  });
  stage(out, "F", [&] {
    out.F = select_F(out.whitney, out.surrogate.arclength);
    if (out.F.empty()) throw std::invalid_argument("no square has E in its double");
  });
  stage(out, "gamma", [&] { out.gamma = gamma_estimates(out.whitney, out.F, out.surrogate.arclength, cfg.optimizer); });
  stage(out, "mu_nu", [&] {
    out.munu = build_mu_nu(out.whitney, out.F, out.surrogate.nu0, out.gamma, out.sigma_estimate.sigma.resolution());
    if (out.munu.mu.empty()) throw std::invalid_argument("mu is empty");
  });
  stage(out, "cstar", [&] {
    const auto& mu = out.munu.mu;
    out.cstar.assign(mu.size(), 0.0);
    parallel_for(mu.size(), [&](std::size_t i) { out.cstar[i] = cauchy_maximal(out.munu.nu, mu.position(i)); });
    if (cfg.alpha_S) {
      out.alpha_S = *cfg.alpha_S;
    } else {
      std::vector<double> v = out.cstar;
      std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
      out.alpha_S = 10.0 * v[v.size() / 2];
      if (!(out.alpha_S > 0.0)) out.alpha_S = 1.0;
    }
  });
  stage(out, "lattice", [&] {
    double radius = 0.0;
    for (const auto& p : out.munu.mu.positions()) radius = std::max(radius, std::abs(p));
    for (const auto& s : e.segments) radius = std::max({radius, std::abs(s.a), std::abs(s.b)});
    int N = 3;
    while (std::ldexp(1.0, N - 3) < radius) ++N;
    out.lattice = random_lattice(cfg.seed, 0, N, radius);
    out.lattice2 = random_lattice(cfg.seed, 1, N, radius);
  });
  stage(out, "H", [&] { out.sets.H = build_H(out.munu.mu, cfg.C0, out.munu.mu.resolution()); });
  stage(out, "H_D", [&] { out.sets.HD = build_HD(out.sets.H, out.lattice); });
  stage(out, "S", [&] { out.sets.S = build_S(out.munu.nu, out.munu.mu, out.alpha_S, out.cstar); });
  stage(out, "T_D", [&] { out.sets.TD = build_TD(out.munu.mu, out.munu.nu, out.lattice, cfg.C_d); });
  stage(out, "verify", [&] { verify(out, cfg); });
}

PipelineResult run_pipeline(const SegmentFamily& e, const PipelineConfig& cfg) {
  PipelineResult out;
  run_pipeline(e, cfg, out);
  return out;
}

Json PipelineResult::report() const {
  Json j;
  j["stages"] = stages_done;
  j["alpha"] = num(alpha);
  j["lambda"] = num(lambda);
  j["rho"] = num(rho);
  j["g_E"] = num(sigma_estimate.g_value);
  j["surrogate"] = {{"K", num(surrogate.K)}, {"mass", num(surrogate.mass())}};
  j["counts"] = {{"whitney", whitney.squares.size()},
                 {"F", F.size()},
                 {"mu_atoms", munu.mu.size()},
                 {"H", sets.H.balls.size()},
                 {"H_D", sets.HD.squares.size()},
                 {"S", sets.S.balls.size()},
                 {"T_D", sets.TD.squares.size()}};
  j["alpha_S"] = num(alpha_S);
  j["lattice"] = {{"N", lattice.N}, {"w", {lattice.w.real(), lattice.w.imag()}}};
  Json items_j = Json::array();
  for (const auto& it : items)
    items_j.push_back({{"item", it.name}, {"left", num(it.left)}, {"right", num(it.right)}, {"status", it.status},
                       {"note", it.note}});
  j["items"] = items_j;
  return j;
}

}  // namespace curvcap
