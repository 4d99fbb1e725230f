#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>

#include <json.hpp>

#include "mirl/errors.hpp"
#include "mirl/forward_sim.hpp"
#include "mirl/potentials.hpp"
#include "mirl/trajectory_io.hpp"
#include "svg.hpp"

namespace mirl::cli {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw RuntimeError("cannot write " + path.string());
  return out;
}

void prepare_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw ConfigError("outputs: cannot create directory " + dir.string());
  }
}

}  // namespace

std::vector<std::string> cmd_simulate(const ExperimentConfig& cfg) {
  const auto& potential = lookup(cfg.potential);
  const SimConfig sim(cfg.sim);
  for (const auto& w : sim.warnings()) std::cerr << "warning: " << w << '\n';
  prepare_dir(cfg.outputs);
  const auto ensemble = simulate_ensemble(potential, sim, cfg.n_paths);
  write_ensemble(cfg.outputs, ensemble, sim, cfg.potential);
  std::vector<std::string> files;
  for (std::size_t i = 0; i < ensemble.size(); ++i) files.push_back(episode_file_name(i));
  return files;
}

std::vector<SweepRow> cmd_estimate_gradient(const ExperimentConfig& cfg) {
  const auto& potential = lookup(cfg.potential);
  const SimConfig sim(cfg.sim);
  for (const auto& w : sim.warnings()) std::cerr << "warning: " << w << '\n';
  prepare_dir(cfg.outputs);

  const auto stats = simulate_statistics(potential, sim, cfg.n_paths);
  std::vector<SweepRow> rows;
  for (double alpha : cfg.grid.points()) {
    rows.push_back({counterfactual_gradient(stats, alpha, sim.s(), cfg.estimator),
                    potential.grad(alpha)});
  }

  auto out = open_out(cfg.outputs / "gradient.csv");
  out << "alpha,estimate,true,stderr,degenerate\n";
  for (const auto& r : rows) {
    out << num(r.estimate.alpha) << ',' << num(r.estimate.ratio) << ',' << num(r.truth) << ','
        << num(r.estimate.ratio_stderr) << ',' << (r.estimate.degenerate ? 1 : 0) << '\n';
  }
  auto raw = open_out(cfg.outputs / "gradient_stats.csv");
  raw << "alpha,ratio,num_mean,den_mean,num_stderr,den_stderr,n_active,degenerate\n";
  for (const auto& r : rows) {
    const auto& e = r.estimate;
    raw << num(e.alpha) << ',' << num(e.ratio) << ',' << num(e.num_mean) << ','
        << num(e.den_mean) << ',' << num(e.num_stderr) << ',' << num(e.den_stderr) << ','
        << e.n_active << ',' << (e.degenerate ? 1 : 0) << '\n';
  }

  if (cfg.wants_figure("grad_sweep")) {
    LinePlot plot{"Counterfactual gradient, " + cfg.potential, "alpha", "gradient", {}};
    Series est{"Malliavin estimate", "#d62728", {}, {}};
    for (const auto& r : rows) {
      est.x.push_back(r.estimate.alpha);
      est.y.push_back(r.estimate.ratio);
    }
    Series truth{"true L'", "#1f77b4", {}, {}};
    const UniformGrid fine{cfg.grid.lo, cfg.grid.hi, 201};
    for (double a : fine.points()) {
      truth.x.push_back(a);
      truth.y.push_back(potential.grad(a));
    }
    plot.series = {truth, est};
    write_svg(cfg.outputs / "grad_sweep.svg", plot);
  }
  return rows;
}

UniformGrid gibbs_grid(const Potential& potential, double beta, std::span<const double> samples) {
  double reach = 1.0;
  for (double x : samples) reach = std::max(reach, std::abs(x) + 0.5);
  for (int attempt = 0; attempt < 12; ++attempt) {
    const UniformGrid grid{-reach, reach, 4001};
    try {
      gibbs_density(potential, beta, grid);
      return grid;
    } catch (const DegenerateInput&) {
      reach *= 1.5;
    }
  }
  throw DegenerateInput("Gibbs density does not decay on [-" + num(reach) + ", " + num(reach) +
                        "]; is the potential confining?");
}

IrlSummary cmd_run_irl(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const auto& potential = lookup(cfg.potential);
  const SimConfig sim(cfg.sim);
  cfg.chain.validate();
  for (const auto& w : sim.warnings()) std::cerr << "warning: " << w << '\n';
  prepare_dir(cfg.outputs);

  IrlSummary summary;
  summary.run = run_irl(potential, sim, cfg.chain, cfg.estimator);
  const auto& run = summary.run;
  summary.recon = reconstruct_loss(run.retained, cfg.chain.beta, cfg.n_bins);
  summary.loss_sup_error = loss_sup_error(summary.recon, potential, 0.02);
  const auto grid = gibbs_grid(potential, cfg.chain.beta, run.retained);
  const auto density = gibbs_density(potential, cfg.chain.beta, grid);
  summary.ks_distance = distribution_distance(run.retained, density, grid);
  summary.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  auto chain_csv = open_out(cfg.outputs / "chain.csv");
  chain_csv << "k,alpha,grad_ratio,grad_true_if_known,degenerate,clipped\n";
  for (std::size_t k = 0; k < run.grad_log.size(); ++k) {
    const auto& r = run.grad_log[k];
    chain_csv << k << ',' << num(r.alpha) << ',' << num(r.ratio) << ','
              << num(potential.grad(r.alpha)) << ',' << (r.degenerate ? 1 : 0) << ','
              << (r.clipped ? 1 : 0) << '\n';
  }

  const auto& recon = summary.recon;
  auto hist = open_out(cfg.outputs / "histogram.csv");
  hist << "bin_lo,bin_hi,density,loss_hat\n";
  for (std::size_t b = 0; b < recon.n_bins(); ++b) {
    hist << num(recon.bin_edges[b]) << ',' << num(recon.bin_edges[b + 1]) << ','
         << num(recon.density[b]) << ',';
    if (recon.loss_hat[b]) hist << num(*recon.loss_hat[b]);
    hist << '\n';
  }

  nlohmann::ordered_json j;
  j["potential"] = cfg.potential;
  j["eta"] = cfg.chain.eta;
  j["beta"] = cfg.chain.beta;
  j["n_steps"] = cfg.chain.n_steps;
  j["burn_in"] = cfg.chain.burn_in;
  j["n_paths_per_step"] = cfg.chain.n_paths;
  j["reuse_ensemble"] = cfg.chain.reuse_ensemble;
  j["chain_seed"] = cfg.chain.chain_seed;
  j["sim_seed"] = cfg.sim.master_seed;
  j["ks_distance"] = summary.ks_distance;
  j["loss_sup_error"] = summary.loss_sup_error;
  j["clip_count"] = run.clip_count;
  j["degenerate_count"] = run.degenerate_count;
  j["retained_count"] = run.retained.size();
  j["metadata"] = {{"runtime_seconds", summary.runtime_seconds}};
  open_out(cfg.outputs / "summary.json") << j.dump(2) << '\n';

  if (cfg.wants_figure("chain_grads")) {
    Series est{"estimated gradient", "#d62728", {}, {}};
    Series truth{"true L'(alpha_k)", "#1f77b4", {}, {}};
    for (std::size_t k = 0; k < run.grad_log.size(); ++k) {
      est.x.push_back(static_cast<double>(k));
      est.y.push_back(run.grad_log[k].ratio);
      truth.x.push_back(static_cast<double>(k));
      truth.y.push_back(potential.grad(run.grad_log[k].alpha));
    }
    write_svg(cfg.outputs / "chain_grads.svg",
              {"Gradient along the chain", "iteration k", "gradient", {est, truth}});
  }

  const double lo = recon.bin_edges.front();
  const double hi = recon.bin_edges.back();
  if (cfg.wants_figure("gibbs_hist")) {
    Series h{"retained histogram", "#d62728", {}, {}};
    for (std::size_t b = 0; b < recon.n_bins(); ++b) {
      h.x.push_back(recon.bin_edges[b]);
      h.y.push_back(recon.density[b]);
      h.x.push_back(recon.bin_edges[b + 1]);
      h.y.push_back(recon.density[b]);
    }
    Series g{"Gibbs density", "#1f77b4", {}, {}};
    for (std::size_t i = 0; i < grid.count; ++i) {
      const double x = grid.at(i);
      if (x < lo || x > hi) continue;
      g.x.push_back(x);
      g.y.push_back(density[i]);
    }
    write_svg(cfg.outputs / "gibbs_hist.svg",
              {"Retained samples vs Gibbs law", "alpha", "density", {g, h}});
  }

  if (cfg.wants_figure("loss_recon")) {
    Series rec{"reconstructed loss", "#d62728", {}, {}};
    double min_l = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < recon.n_bins(); ++b) {
      rec.x.push_back(recon.bin_center(b));
      rec.y.push_back(recon.loss_hat[b] ? *recon.loss_hat[b]
                                        : std::numeric_limits<double>::quiet_NaN());
      if (recon.loss_hat[b]) min_l = std::min(min_l, potential.eval(recon.bin_center(b)));
    }
    Series truth{"L - min L", "#1f77b4", {}, {}};
    const UniformGrid fine{lo, hi, 301};
    for (double x : fine.points()) {
      truth.x.push_back(x);
      truth.y.push_back(potential.eval(x) - min_l);
    }
    write_svg(cfg.outputs / "loss_recon.svg",
              {"Reconstructed vs true loss", "alpha", "loss", {truth, rec}});
  }
  return summary;
}

std::vector<oracle::OracleReport> cmd_validate(const ExperimentConfig& cfg) {
  oracle::SuiteOptions options;
  options.seed = cfg.sim.master_seed;
  options.corrupt_d_gamma = cfg.corrupt_d_gamma;
  if (cfg.validate_only) {
    if (cfg.validate_only->empty()) throw UsageError("validate: empty check selection");
    options.only = *cfg.validate_only;
  }
  prepare_dir(cfg.outputs);
  const auto reports = oracle::run_suite(options);
  oracle::write_report_json(cfg.outputs / "oracle_report.json", reports);
  return reports;
}

}  // namespace mirl::cli
