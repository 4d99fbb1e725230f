#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "mirl/errors.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> overrides;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "key = value config file");
  cmd->add_option("--out", flags.out, "output directory (same as --outputs)");
  cmd->add_option("--seed", flags.seed, "sets sim.seed and chain.seed");
  for (const auto& spec : mirl::cli::key_table()) {
    cmd->add_option("--" + spec.key, flags.overrides[spec.key],
                    spec.help + " [default: " + spec.default_value + "]");
  }
}

mirl::cli::ExperimentConfig build_config(CLI::App* cmd, const CommonFlags& flags) {
  mirl::cli::RawConfig raw;
  if (!flags.config.empty()) raw.merge_file(flags.config);
  if (cmd->count("--seed") > 0) {
    raw.set("sim.seed", std::to_string(flags.seed));
    raw.set("chain.seed", std::to_string(flags.seed));
  }
  for (const auto& spec : mirl::cli::key_table()) {
    if (cmd->count("--" + spec.key) > 0) raw.set(spec.key, flags.overrides.at(spec.key));
  }
  if (!flags.out.empty()) raw.set("outputs", flags.out);
  return mirl::cli::resolve(raw);
}

int run(CLI::App& app, CLI::App* simulate, CLI::App* estimate, CLI::App* irl, CLI::App* validate,
        const CommonFlags& flags) {
  using namespace mirl::cli;
  if (simulate->parsed()) {
    const auto cfg = build_config(simulate, flags);
    const auto files = cmd_simulate(cfg);
    std::cout << "wrote " << files.size() << " episodes + manifest.json to "
              << cfg.outputs.string() << '\n';
    return 0;
  }
  if (estimate->parsed()) {
    const auto cfg = build_config(estimate, flags);
    const auto rows = cmd_estimate_gradient(cfg);
    std::printf("%10s %12s %12s %12s %s\n", "alpha", "estimate", "true", "stderr", "degenerate");
    for (const auto& r : rows) {
      std::printf("%10.4f %12.5f %12.5f %12.5f %d\n", r.estimate.alpha, r.estimate.ratio, r.truth,
                  r.estimate.ratio_stderr, r.estimate.degenerate ? 1 : 0);
    }
    return 0;
  }
  if (irl->parsed()) {
    const auto cfg = build_config(irl, flags);
    const auto s = cmd_run_irl(cfg);
    std::printf("retained %zu  degenerate %zu  clipped %zu\n", s.run.retained.size(),
                s.run.degenerate_count, s.run.clip_count);
    std::printf("KS distance %.4f  loss sup error %.4f  runtime %.1fs\n", s.ks_distance,
                s.loss_sup_error, s.runtime_seconds);
    return 0;
  }
  if (validate->parsed()) {
    const auto cfg = build_config(validate, flags);
    bool all = true;
    for (const auto& r : cmd_validate(cfg)) {
      std::printf("%-32s %s  estimate %.6g  target %.6g  tol %.3g\n", r.name.c_str(),
                  r.passed ? "PASS" : "FAIL", r.estimate, r.target, r.tolerance);
      all = all && r.passed;
    }
    return all ? 0 : 1;
  }
  std::cerr << app.help();
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Passive loss reconstruction from Langevin trajectories"};
  app.require_subcommand(1);
  CommonFlags flags;
  auto* simulate = app.add_subcommand("simulate", "simulate and store an ensemble");
  auto* estimate = app.add_subcommand("estimate-gradient", "counterfactual gradient sweep");
  auto* irl = app.add_subcommand("run-irl", "outer Langevin chain and loss reconstruction");
  auto* validate = app.add_subcommand("validate", "run the oracle suite");
  for (auto* cmd : {simulate, estimate, irl, validate}) add_common(cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return run(app, simulate, estimate, irl, validate, flags);
  } catch (const mirl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const mirl::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return 3;
  }
}
