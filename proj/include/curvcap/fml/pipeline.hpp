#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "curvcap/capacity/optimizer.hpp"
#include "curvcap/fml/circles.hpp"
#include "curvcap/fml/exceptional.hpp"
#include "curvcap/fml/surrogate.hpp"
#include "curvcap/plane/generators.hpp"
#include "curvcap/plane/io.hpp"

namespace curvcap {

struct PipelineConfig {
  std::optional<double> lambda;   // default alpha / 2, alpha = min U_sigma on the atoms
  double C0 = 100.0;
  double C_d = 4.0;
  std::optional<double> alpha_S;  // default 10 x median C_* nu over the atoms of mu
  std::optional<double> rho;      // default resolution(sigma) / 4
  std::uint64_t seed = 0;         // lattice draws
  int quad_cells = 16;            // Vitushkin quadrature per 2Q_i
  int tamt_samples = 16;          // points per S ball for the tamt check
  OptimizerConfig optimizer;

  void validate() const;
  Json to_json() const;
};

// Thrown with the name of the stage that failed.
class PipelineStageError : public std::runtime_error {
 public:
  PipelineStageError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct ReportItem {
  std::string name;
  double left = 0.0;
  double right = 0.0;
  std::string status;  // "pass", "fail" or "record"
  std::string note;
};

struct PipelineResult {
  SegmentFamily e;
  Surrogate surrogate;
  CapacityEstimate sigma_estimate;
  double alpha = 0.0;
  double lambda = 0.0;
  double rho = 0.0;
  WhitneyDecomposition whitney;
  std::vector<std::size_t> F;
  std::vector<double> gamma;
  MuNu munu;
  std::vector<double> cstar;  // C_* nu at the atoms of mu
  double alpha_S = 0.0;
  DyadicLattice lattice;
  DyadicLattice lattice2;
  ExceptionalSets sets;
  std::vector<ReportItem> items;
  std::vector<std::string> stages_done;

  const ReportItem* item(const std::string& name) const;
  Json report() const;
};

// sigma -> Omega -> Whitney -> F -> mu, nu -> H, H_D, S, T_D -> report.
// `out` holds every artifact built before a failure.
void run_pipeline(const SegmentFamily& e, const PipelineConfig& cfg, PipelineResult& out);
PipelineResult run_pipeline(const SegmentFamily& e, const PipelineConfig& cfg = {});

// max over squares R of one lattice with l(R) >= min_side of |nu(R)| / l(R).
double clcl_ratio(const ComplexAtomicMeasure& nu, const DyadicLattice& lat, double min_side);

std::string pipeline_svg(const PipelineResult& r);

}  // namespace curvcap
