#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "commands.hpp"
#include "curvcap/capacity/diagnostics.hpp"
#include "curvcap/capacity/growth.hpp"
#include "curvcap/capacity/optimizer.hpp"
#include "curvcap/fml/pipeline.hpp"
#include "curvcap/kernels/curvature.hpp"
#include "curvcap/kernels/mv.hpp"
#include "curvcap/plane/generators.hpp"
#include "manifest.hpp"

namespace curvcap::cli {

std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void emit(CommandRecord& rec, const std::string& path, const std::string& text) {
  write_text_file(path, text);
  rec.outputs.push_back(path);
}

namespace {

// A command-level input error that is not an exception from the library.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::pair<int, int> parse_sweep(const std::string& s) {
  auto dots = s.find("..");
  if (dots == std::string::npos) throw InputError("--sweep expects A..B");
  try {
    std::size_t used = 0;
    int a = std::stoi(s.substr(0, dots), &used);
    if (used != dots) throw InputError("--sweep expects A..B");
    std::string rest = s.substr(dots + 2);
    int b = std::stoi(rest, &used);
    if (used != rest.size()) throw InputError("--sweep expects A..B");
    if (a > b) throw InputError("--sweep range is empty");
    return {a, b};
  } catch (const std::logic_error&) {
    throw InputError("--sweep expects A..B");
  }
}

AtomicMeasure load_measure(CommandRecord& rec, const std::string& path) {
  rec.inputs.push_back(path);
  return measure_from_json(read_json_file(path));
}

// ---- cantor

int cmd_cantor(int n, const std::optional<std::string>& out_path, CommandRecord& rec, std::ostream& out,
               std::ostream& err) {
  rec.config = {{"n", n}};
  if (n < 0 || n > 8) {
    err << "error: n must lie in 0..8\n";
    return kExitInput;
  }
  AtomicMeasure m = cantor_set(n);
  if (out_path) emit(rec, *out_path, dump_json(to_json(m)));
  out << "atoms " << m.size() << " mass " << format_double(m.mass()) << "\n";
  return kExitOk;
}

// ---- estimate

struct EstimateOptions {
  std::optional<std::string> measure;
  std::optional<std::string> sweep;
  std::optional<std::string> out;
  std::optional<std::string> trace;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  int max_iterations = 200;
};

Json diagnostics_json(const ExtremalDiagnostics& d) {
  return {{"curvature", d.curvature}, {"mass", d.mass},   {"ratio", d.ratio},
          {"u_min", d.u_min},         {"u_median", d.u_median}, {"alpha", d.alpha},
          {"non_extremal", d.non_extremal}};
}

int cmd_estimate(const EstimateOptions& opt, CommandRecord& rec, std::ostream& out, std::ostream& err) {
  OptimizerConfig cfg;
  cfg.seed = opt.seed;
  cfg.epsilon = opt.epsilon;
  cfg.max_iterations = opt.max_iterations;
  rec.seed = opt.seed;
  rec.config = {{"epsilon", opt.epsilon}, {"max_iterations", opt.max_iterations}, {"tolerance", cfg.tolerance}};

  if (opt.sweep) {
    auto [a, b] = parse_sweep(*opt.sweep);
    if (a < 0 || b > 8) throw InputError("--sweep generations must lie in 0..8");
    rec.config["sweep"] = {a, b};
    std::ostringstream csv;
    csv << "n,atoms,g,g_sqrt_n,scaling_only,curvature,converged,iterations\n";
    bool all_converged = true;
    for (int n = a; n <= b; ++n) {
      AtomicMeasure m = cantor_set(n);
      CapacityEstimate e = optimize_gplus(m, cfg);
      // Scaling-only value: the natural measure rescaled, nothing reweighted.
      ScalingResult s = optimal_scaling(m, GrowthConstraintSet(m), opt.epsilon);
      all_converged = all_converged && e.converged;
      csv << n << ',' << m.size() << ',' << format_double(e.g_value) << ','
          << format_double(e.g_value * std::sqrt(static_cast<double>(n))) << ',' << format_double(s.value) << ','
          << format_double(curvature_total(m, opt.epsilon).total) << ',' << (e.converged ? 1 : 0) << ',' << e.iterations
          << '\n';
    }
    if (opt.out)
      emit(rec, *opt.out, csv.str());
    else
      out << csv.str();
    if (!all_converged) {
      err << "warning: at least one sweep run did not converge\n";
      return kExitUnconverged;
    }
    return kExitOk;
  }

  if (!opt.measure) throw InputError("estimate needs --measure or --sweep");
  AtomicMeasure m = load_measure(rec, *opt.measure);
  if (m.empty()) throw InputError("measure has no atoms");
  CapacityEstimate e = optimize_gplus(m, cfg);
  Json j = to_json(e);
  j["diagnostics"] = diagnostics_json(extremal_diagnostics(e.sigma, opt.epsilon));
  if (opt.out) {
    emit(rec, *opt.out, dump_json(j));
    emit(rec, opt.trace.value_or(*opt.out + ".trace.csv"), trace_csv(e.trace));
  } else {
    out << dump_json(j);
    if (opt.trace) emit(rec, *opt.trace, trace_csv(e.trace));
  }
  if (!e.converged) {
    err << "warning: optimizer did not converge in " << e.iterations << " iterations\n";
    return kExitUnconverged;
  }
  return kExitOk;
}

// ---- mv

int cmd_mv(const std::string& measure, const std::vector<double>& eps, const std::optional<std::string>& out_path,
           CommandRecord& rec, std::ostream& out) {
  for (double e : eps)
    if (!(e > 0.0) || !std::isfinite(e)) throw InputError("epsilon values must be positive");
  AtomicMeasure m = load_measure(rec, measure);
  rec.config = {{"epsilon", eps}};
  std::vector<std::optional<double>> list(eps.begin(), eps.end());
  if (list.empty()) list.push_back(std::nullopt);  // the measure's resolution
  std::ostringstream csv;
  csv << "epsilon,lhs,curv_term,remainder,mass\n";
  for (const auto& e : list) {
    MvReport r = mv_identity_report(m, e);
    csv << format_double(r.epsilon) << ',' << format_double(r.lhs) << ',' << format_double(r.curvature_term) << ','
        << format_double(r.remainder) << ',' << format_double(r.mass) << '\n';
  }
  if (out_path)
    emit(rec, *out_path, csv.str());
  else
    out << csv.str();
  return kExitOk;
}

// ---- pipeline

struct PipelineOptions {
  std::string segments;
  std::optional<std::string> out;
  std::optional<std::string> svg;
  PipelineConfig cfg;
  std::optional<double> lambda, alpha_s, rho;
};

int cmd_pipeline(PipelineOptions opt, CommandRecord& rec, std::ostream& out, std::ostream& err) {
  rec.inputs.push_back(opt.segments);
  SegmentFamily e = segments_from_json(read_json_file(opt.segments));
  opt.cfg.lambda = opt.lambda;
  opt.cfg.alpha_S = opt.alpha_s;
  opt.cfg.rho = opt.rho;
  rec.config = opt.cfg.to_json();
  rec.seed = opt.cfg.seed;

  PipelineResult r;
  std::optional<std::string> failed;
  try {
    run_pipeline(e, opt.cfg, r);
  } catch (const PipelineStageError& ex) {
    failed = ex.stage();
    err << "error: pipeline stage '" << ex.stage() << "' failed: " << ex.what() << "\n";
  }
  Json j = r.report();
  j["config"] = opt.cfg.to_json();
  j["status"] = failed ? "failed" : "complete";
  if (failed) j["failed_stage"] = *failed;
  if (opt.out)
    emit(rec, *opt.out, dump_json(j));
  else
    out << dump_json(j);
  if (opt.svg) {
    try {
      emit(rec, *opt.svg, pipeline_svg(r));
    } catch (const std::exception& ex) {
      if (!failed) throw;
      err << "warning: no SVG for the partial run: " << ex.what() << "\n";
    }
  }
  if (failed) return kExitStage;
  std::size_t fails = 0;
  for (const auto& it : r.items) fails += it.status == "fail";
  out << "pipeline complete: " << r.items.size() << " items, " << fails << " failed checks\n";
  return kExitOk;
}

void write_manifest(const CommandRecord& rec, const std::vector<std::string>& args,
                    const std::optional<std::string>& path, double wall) {
  std::string target;
  if (path)
    target = *path;
  else if (!rec.outputs.empty())
    target = rec.outputs.front() + ".manifest.json";
  else
    return;
  RunManifest m;
  m.command = rec.command;
  m.argv = args;
  m.config = rec.config;
  m.seed = rec.seed;
  for (const auto& p : rec.inputs) m.inputs.push_back({p, file_digest(p)});
  for (const auto& p : rec.outputs) m.outputs.push_back({p, file_digest(p)});
  m.wall_time = wall;
  write_text_file(target, dump_json(m.to_json()));
}

int replay(const std::string& manifest_path, std::ostream& out, std::ostream& err) {
  RunManifest m = RunManifest::from_json(read_json_file(manifest_path));
  for (const auto& in : m.inputs)
    if (file_digest(in.path) != in.digest) {
      err << "error: input " << in.path << " changed since the recorded run\n";
      return kExitInput;
    }
  std::ostringstream sink;
  int code = run_cli(m.argv, sink, err);
  if (code != kExitOk && code != kExitUnconverged) {
    err << "error: replay exited with " << code << "\n";
    return code;
  }
  bool same = true;
  for (const auto& o : m.outputs) {
    std::string now = file_digest(o.path);
    out << o.path << " " << (now == o.digest ? "identical" : "differs") << "\n";
    same = same && now == o.digest;
  }
  return same ? kExitOk : kExitReplayMismatch;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curvature and capacity experiments on planar point clouds", "curvcap"};
  app.require_subcommand(1);
  std::optional<std::string> manifest;
  app.add_option("--manifest", manifest, "Manifest path (default: first output + .manifest.json)");

  CommandRecord rec;

  int cantor_n = -1;
  std::optional<std::string> cantor_out;
  auto* cantor = app.add_subcommand("cantor", "Write the generation-n quarter Cantor measure");
  cantor->add_option("--n", cantor_n, "Generation, 0..8")->required();
  cantor->add_option("--out", cantor_out, "Measure JSON path");

  EstimateOptions est;
  auto* estimate = app.add_subcommand("estimate", "Lower bound for the curvature capacity by measure optimization");
  estimate->add_option("--measure", est.measure, "Measure JSON");
  estimate->add_option("--sweep", est.sweep, "Cantor generations A..B; writes CSV instead of JSON");
  estimate->add_option("--seed", est.seed);
  estimate->add_option("--epsilon", est.epsilon, "Curvature truncation (0: none)");
  estimate->add_option("--max-iter", est.max_iterations);
  estimate->add_option("--out", est.out);
  estimate->add_option("--trace", est.trace, "Trace CSV (default: OUT.trace.csv)");

  std::string mv_measure;
  std::vector<double> mv_eps;
  std::optional<std::string> mv_out;
  auto* mv = app.add_subcommand("mv", "Melnikov-Verdera identity table");
  mv->add_option("--measure", mv_measure)->required();
  mv->add_option("--epsilon", mv_eps, "Comma-separated truncations (default: resolution)")->delimiter(',');
  mv->add_option("--out", mv_out, "CSV path");

  PipelineOptions pl;
  auto* pipeline = app.add_subcommand("pipeline", "First main lemma construction on a segment family");
  pipeline->add_option("--segments", pl.segments)->required();
  pipeline->add_option("--c0", pl.cfg.C0);
  pipeline->add_option("--cd", pl.cfg.C_d);
  pipeline->add_option("--alpha-s", pl.alpha_s);
  pipeline->add_option("--lambda", pl.lambda);
  pipeline->add_option("--rho", pl.rho);
  pipeline->add_option("--seed", pl.cfg.seed);
  pipeline->add_option("--svg", pl.svg);
  pipeline->add_option("--out", pl.out, "Report JSON path");

  TbOptions tb;
  auto* tbc = app.add_subcommand("tb", "T(b) suite: martingales, Carleson, bad squares, G set");
  tbc->add_option("--measure", tb.measure)->required();
  tbc->add_option("--nu", tb.nu, "Complex measure on the atoms of mu (default: nu = mu)");
  tbc->add_option("--trials", tb.trials);
  tbc->add_option("--m", tb.m);
  tbc->add_option("--M", tb.M);
  tbc->add_option("--cd", tb.c_d);
  tbc->add_option("--c0", tb.c0);
  tbc->add_option("--seed", tb.seed);
  tbc->add_option("--out", tb.out, "Report JSON path");

  std::string replay_path;
  auto* rep = app.add_subcommand("replay", "Re-run a manifest and compare output digests");
  rep->add_option("manifest", replay_path)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  const auto start = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    if (*cantor) {
      rec.command = "cantor";
      code = cmd_cantor(cantor_n, cantor_out, rec, out, err);
    } else if (*estimate) {
      rec.command = "estimate";
      code = cmd_estimate(est, rec, out, err);
    } else if (*mv) {
      rec.command = "mv";
      code = cmd_mv(mv_measure, mv_eps, mv_out, rec, out);
    } else if (*pipeline) {
      rec.command = "pipeline";
      code = cmd_pipeline(pl, rec, out, err);
    } else if (*tbc) {
      rec.command = "tb";
      code = cmd_tb(tb, rec, out, err);
    } else if (*rep) {
      return replay(replay_path, out, err);
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Json::exception& e) {
    err << "error: bad input: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  try {
    write_manifest(rec, args, manifest, wall);
  } catch (const std::exception& e) {
    err << "error: cannot write manifest: " << e.what() << "\n";
    return kExitInput;
  }
  return code;
}

}  // namespace curvcap::cli
