#include "curvcap/capacity/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "curvcap/capacity/diagnostics.hpp"
#include "curvcap/kernels/curvature.hpp"
#include "curvcap/util/parallel.hpp"

namespace curvcap {

double melnikov_functional(const AtomicMeasure& m, double epsilon) {
  double w = m.mass();
  if (!(w > 0.0)) return 0.0;
  double k = curvature_total(m, epsilon).total;
  return w * w / (w + k);
}

ScalingResult optimal_scaling(double mass, double curvature, double t_max) {
  if (!(mass > 0.0)) return {1.0, 0.0};
  if (!(t_max > 0.0)) throw std::invalid_argument("scale bound must be positive");
  double t = t_max;
  if (curvature > 0.0) t = std::min(std::sqrt(mass / curvature), t_max);
  if (!std::isfinite(t)) throw std::invalid_argument("zero curvature without a growth bound: scale is unbounded");
  double tw = t * mass;
  return {t, tw * tw / (tw + t * t * t * curvature)};
}

ScalingResult optimal_scaling(const AtomicMeasure& m, const GrowthConstraintSet& g, double epsilon) {
  if (m.empty()) return {1.0, 0.0};
  if (g.atom_count() != m.size()) throw std::invalid_argument("constraints were built on a different support");
  return optimal_scaling(m.mass(), curvature_total(m, epsilon).total, g.feasible_scale(m.weights()));
}

namespace {

struct State {
  std::vector<double> w;
  std::vector<double> p;
  double mass = 0.0;
  double curv = 0.0;
  double g = 0.0;
  double scale = 1.0;  // factor applied to the raw candidate
};

double g_of(double w, double k) { return w > 0.0 ? w * w / (w + k) : 0.0; }

// Projects v onto the constraints, then applies the optimal scaling.
State settle(std::vector<double> v, const GrowthConstraintSet& cons, const CurvatureEngine& engine) {
  State s;
  double f = cons.feasible_scale(v);
  double proj = std::min(1.0, f);
  for (double& x : v) x *= proj;
  std::vector<double> p = engine.potentials(v);
  double w = pairwise_sum(v);
  double k = weighted_total(v, p);
  double t = optimal_scaling(w, k, f / proj).t;
  for (double& x : v) x *= t;
  for (double& x : p) x *= t * t;
  s.w = std::move(v);
  s.p = std::move(p);
  s.mass = t * w;
  s.curv = t * t * t * k;
  s.g = g_of(s.mass, s.curv);
  s.scale = proj * t;
  return s;
}

// Value of the settled measure along cos(th) s0 + sin(th) a, computed from
// the cubic expansion of c^2 and the linear constraint masses.
struct Cone {
  double w0, k0, wa, ka, x1, x2;  // x1 = sum a p(s0), x2 = sum s0 p(a)
  std::vector<double> m0, ma, radii;

  struct Eval {
    double g, factor;  // factor: total scaling applied to the combination
  };

  Eval at(double th) const {
    double al = std::cos(th), be = std::sin(th);
    double f = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < m0.size(); ++c) {
      double m = al * m0[c] + be * ma[c];
      if (m > 0.0) f = std::min(f, radii[c] / m);
    }
    double w = al * w0 + be * wa;
    double k = al * al * al * k0 + 3.0 * al * al * be * x1 + 3.0 * al * be * be * x2 + be * be * be * ka;
    double proj = std::min(1.0, f);
    w *= proj;
    k *= proj * proj * proj;
    ScalingResult r = optimal_scaling(w, std::max(k, 0.0), f / proj);
    return {r.value, proj * r.t};
  }
};

double golden_max(const Cone& cone, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = cone.at(x1).g, f2 = cone.at(x2).g;
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = cone.at(x2).g;
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = cone.at(x1).g;
    }
  }
  return 0.5 * (lo + hi);
}

// One-sided derivative at 0 of delta -> g(s(delta) (sigma + delta a)), where s
// is the projection factor min(1, min_c r_c / mass_c).
double uniform_direction_derivative(const State& st, std::span<const double> a, const GrowthConstraintSet& cons) {
  const double w = st.mass, k = st.curv;
  const double wa = pairwise_sum(a);
  const double xa = weighted_total(a, st.p);
  const double den = (w + k) * (w + k);
  const double grad_a = (2.0 * w * wa * (w + k) - w * w * (wa + 3.0 * xa)) / den;
  const double grad_s = w * w * (w - k) / den;
  std::vector<double> ms = cons.masses(st.w), ma = cons.masses(std::vector<double>(a.begin(), a.end()));
  double ds = 0.0;
  for (std::size_t c = 0; c < ms.size(); ++c) {
    double r = cons.radius(c);
    if (ms[c] > 0.0 && ms[c] >= r * (1.0 - 1e-9)) ds = std::min(ds, -r * ma[c] / (ms[c] * ms[c]));
  }
  return grad_a + ds * grad_s;
}

}  // namespace

CapacityEstimate optimize_gplus(const AtomicMeasure& support, const OptimizerConfig& cfg,
                                const std::optional<std::vector<double>>& initial_weights) {
  if (support.empty()) throw std::invalid_argument("optimizer support is empty");
  if (cfg.max_iterations < 0) throw std::invalid_argument("iteration cap must be nonnegative");
  if (!(cfg.tolerance > 0.0) || !(cfg.initial_step > 0.0) || !(cfg.min_step > 0.0))
    throw std::invalid_argument("optimizer tolerances must be positive");
  const std::size_t n = support.size();
  std::vector<double> start(support.weights().begin(), support.weights().end());
  if (initial_weights) {
    if (initial_weights->size() != n) throw std::invalid_argument("initial weights do not match the support");
    for (double x : *initial_weights)
      if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("initial weights must be finite and >= 0");
    start = *initial_weights;
  }
  if (!(pairwise_sum(start) > 0.0)) throw std::invalid_argument("starting measure has zero mass");

  GrowthConstraintSet cons(support);
  CurvatureEngine engine(support.positions(), cfg.epsilon);

  CapacityEstimate out;
  out.epsilon = cfg.epsilon;
  out.seed = cfg.seed;
  State best = settle(start, cons, engine);
  out.trace.push_back({0, best.g, best.mass, best.curv, best.scale});

  double eta = cfg.initial_step;
  int it = 0;
  while (it < cfg.max_iterations) {
    ++it;
    std::vector<double> cand(n);
    const double w = best.mass, k = best.curv;
    for (std::size_t i = 0; i < n; ++i) {
      double ex = eta * (2.0 - w * (1.0 + 3.0 * best.p[i]) / (w + k));
      cand[i] = best.w[i] * std::exp(std::clamp(ex, -50.0, 50.0));
    }
    State c = settle(std::move(cand), cons, engine);
    bool stop = false;
    if (c.g > best.g) {
      double rel = (c.g - best.g) / best.g;
      best = std::move(c);
      stop = rel < cfg.tolerance;
    } else {
      eta *= 0.5;
      stop = eta < cfg.min_step;
    }
    out.trace.push_back({it, best.g, best.mass, best.curv, best.scale});
    if (stop) {
      out.converged = true;
      break;
    }
  }
  out.iterations = it;
  if (cfg.max_iterations == 0) out.converged = false;

  // Uniform direction: the support's natural weights at the current mass.
  std::vector<double> a(support.weights().begin(), support.weights().end());
  {
    double na = pairwise_sum(a);
    for (double& x : a) x *= best.mass / na;
  }

  if (cfg.polish) {
    Cone cone;
    std::vector<double> pa = engine.potentials(a);
    cone.w0 = best.mass;
    cone.k0 = best.curv;
    cone.wa = pairwise_sum(a);
    cone.ka = weighted_total(a, pa);
    cone.x1 = weighted_total(a, best.p);
    cone.x2 = weighted_total(best.w, pa);
    cone.m0 = cons.masses(best.w);
    cone.ma = cons.masses(a);
    cone.radii.resize(cons.size());
    for (std::size_t c = 0; c < cons.size(); ++c) cone.radii[c] = cons.radius(c);

    const int coarse = 64;
    const double step = std::numbers::pi / 2.0 / coarse;
    int arg = 0;
    double top = cone.at(0.0).g;
    for (int q = 1; q <= coarse; ++q) {
      double v = cone.at(q * step).g;
      if (v > top) {
        top = v;
        arg = q;
      }
    }
    double th = golden_max(cone, std::max(0, arg - 1) * step, std::min(coarse, arg + 1) * step);
    if (cone.at(th).g < top) th = arg * step;
    if (th > 0.0 && cone.at(th).g > cone.at(0.0).g) {
      double al = std::cos(th), be = std::sin(th);
      std::vector<double> v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = al * best.w[i] + be * a[i];
      State pol = settle(std::move(v), cons, engine);
      if (pol.g >= best.g) {
        best = std::move(pol);
        out.polish_angle = th;
        out.trace.push_back({it + 1, best.g, best.mass, best.curv, best.scale});
      }
    }
    double na = pairwise_sum(a);
    for (double& x : a) x *= best.mass / na;
  }

  // Report values recomputed from the final weights.
  best.p = engine.potentials(best.w);
  best.mass = pairwise_sum(best.w);
  best.curv = weighted_total(best.w, best.p);
  out.sigma = support.with_weights(best.w);
  out.mass = best.mass;
  out.curvature = best.curv;
  out.g_value = g_of(best.mass, best.curv);
  out.derivative_check = uniform_direction_derivative(best, a, cons);
  std::vector<double> u = atom_potentials(out.sigma, cfg.epsilon);
  out.potential_min = *std::min_element(u.begin(), u.end());
  double u_max = *std::max_element(u.begin(), u.end());
  out.u_normalized_bound = u_max > 0.0 ? out.mass / u_max : 0.0;
  return out;
}

Json to_json(const CapacityEstimate& e) {
  Json j;
  j["g_value"] = e.g_value;
  j["mass"] = e.mass;
  j["curvature"] = e.curvature;
  j["potential_min"] = e.potential_min;
  j["u_normalized_bound"] = e.u_normalized_bound;
  j["derivative_check"] = e.derivative_check;
  j["polish_angle"] = e.polish_angle;
  j["converged"] = e.converged;
  j["status"] = e.converged ? "converged" : "unconverged";
  j["iterations"] = e.iterations;
  j["epsilon"] = e.epsilon;
  j["seed"] = e.seed;
  j["sigma"] = to_json(e.sigma);
  return j;
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream os;
  os.precision(17);
  os << "iter,g_value,mass,curvature,scale\n";
  for (const auto& r : trace) os << r.iter << ',' << r.g_value << ',' << r.mass << ',' << r.curvature << ',' << r.scale << '\n';
  return os.str();
}

}  // namespace curvcap
