#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"
#include "mirl/estimator.hpp"
#include "mirl/irl_chain.hpp"
#include "mirl/oracle/oracle.hpp"

namespace mirl::cli {

/// `simulate`: episode CSVs plus manifest.json in cfg.outputs.
std::vector<std::string> cmd_simulate(const ExperimentConfig& cfg);

struct SweepRow {
  GradientEstimate estimate;
  double truth = 0.0;
};

/// `estimate-gradient`: gradient.csv (alpha,estimate,true,stderr,degenerate),
/// gradient_stats.csv with the estimator's raw moments, grad_sweep.svg.
std::vector<SweepRow> cmd_estimate_gradient(const ExperimentConfig& cfg);

struct IrlSummary {
  ChainRun run;
  LossReconstruction recon;
  double ks_distance = 0.0;
  double loss_sup_error = 0.0;
  double runtime_seconds = 0.0;
};

/// `run-irl`: chain.csv, histogram.csv, summary.json and the chain SVGs.
IrlSummary cmd_run_irl(const ExperimentConfig& cfg);

/// `validate`: oracle_report.json. Throws UsageError on an empty or unknown
/// selection.
std::vector<oracle::OracleReport> cmd_validate(const ExperimentConfig& cfg);

/// Grid wide enough that the Gibbs density is negligible at both ends and
/// every sample lies inside.
UniformGrid gibbs_grid(const Potential& potential, double beta, std::span<const double> samples);

}  // namespace mirl::cli
