#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>

#include <json.hpp>

#include "mirl/errors.hpp"
#include "mirl/estimator.hpp"
#include "mirl/malliavin.hpp"
#include "mirl/oracle/oracle.hpp"
#include "mirl/stats.hpp"

namespace mirl::oracle {

namespace {

using Check = std::function<OracleReport(const SuiteOptions&)>;

SimConfig default_sim(std::uint64_t seed) {
  SimSettings settings;
  settings.master_seed = seed;
  return SimConfig(settings);
}

OracleReport check_normalization(const SuiteOptions& opt) {
  const auto& quartic = lookup("quartic");
  const auto sim = default_sim(opt.seed);
  const auto paths = simulate_ensemble(quartic, sim, 200);
  double worst = 0.0;
  for (const auto& traj : paths) {
    const auto frame = build_frame(traj, sim.s_index());
    double acc = 0.0;
    for (std::size_t k = 0; k < frame.s_idx; ++k) acc += frame.d_xs[k] * frame.u[k] * sim.dt();
    worst = std::max(worst, std::abs(acc - 1.0));
  }
  return OracleReport::make("normalization", 0.0, worst, 5.0 * sim.dt());
}

OracleReport check_factorization(const SuiteOptions& opt) {
  const auto& quartic = lookup("quartic");
  const auto sim = default_sim(opt.seed);
  const auto paths = simulate_ensemble(quartic, sim, 200);
  double worst = 0.0;
  for (const auto& traj : paths) {
    const auto frame = build_frame(traj, sim.s_index());
    for (std::size_t k = 0; k <= frame.s_idx; ++k) {
      worst = std::max(worst, std::abs(frame.u[k] - frame.gamma * frame.v[k]) / std::abs(frame.u[k]));
    }
  }
  return OracleReport::make("factorization", 0.0, worst, 1e-12);
}

// The production derivative uses a left-Riemann exponent and the ODE oracle
// integrates a piecewise-linear Hessian, so log(d_xs / oracle) must equal the
// trapezoid correction (dt / 2) (h_s - h_k) up to RK4 round-off.
OracleReport check_ode(const SuiteOptions& opt) {
  const auto& quartic = lookup("quartic");
  const auto sim = default_sim(opt.seed);
  const auto paths = simulate_ensemble(quartic, sim, 20);
  double worst = 0.0;
  for (const auto& traj : paths) {
    const std::size_t s = sim.s_index();
    const auto d = malliavin_derivative(traj, s);
    const auto o = ode_malliavin_oracle(traj, s);
    for (std::size_t k = 0; k <= s; ++k) {
      const double expected = 0.5 * sim.dt() * (traj.hess_obs[s] - traj.hess_obs[k]);
      worst = std::max(worst, std::abs(std::log(d[k] / o[k]) - expected));
    }
  }
  return OracleReport::make("malliavin_derivative_vs_ode", 0.0, worst, 1e-8);
}

// Pooled integrated gap sum |dG - dG_oracle| / sum |dG_oracle| over 100 paths.
// The observable route estimates L''' dt through a squared increment, so the
// two routes differ by quadratic-variation noise of order sqrt(dt) (about
// 0.08 at dt = 1e-3); 0.15 leaves margin while a 50% corruption fails.
OracleReport check_d_gamma(const SuiteOptions& opt) {
  const auto& quartic = lookup("quartic");
  const auto sim = default_sim(opt.seed);
  const auto paths = simulate_ensemble(quartic, sim, 100);
  double gap = 0.0;
  double scale = 0.0;
  for (const auto& traj : paths) {
    auto dg = d_gamma(traj, sim.s_index());
    if (opt.corrupt_d_gamma) {
      for (auto& v : dg) v *= 1.5;
    }
    const auto ref = third_derivative_oracle(traj, sim.s_index(), quartic);
    for (std::size_t k = 0; k < dg.size(); ++k) {
      gap += std::abs(dg[k] - ref[k]);
      scale += std::abs(ref[k]);
    }
  }
  return OracleReport::make("d_gamma_vs_third_derivative", 0.0, gap / scale, 0.15);
}

OracleReport check_ou(const SuiteOptions& opt) {
  const auto& ou = lookup("ou");
  const auto sim = default_sim(opt.seed);
  const auto stats = simulate_statistics(ou, sim, 20000);
  const double alpha = 0.3;
  const auto est = counterfactual_gradient(stats, alpha, sim.s());
  return OracleReport::make("ou_conditional_expectation", alpha, est.ratio,
                            3.0 * est.ratio_stderr);
}

OracleReport check_adjoint(const SuiteOptions& opt) {
  const auto& zero = lookup("zero");
  const auto sim = default_sim(opt.seed);
  const auto paths = simulate_ensemble(zero, sim, 20000);
  std::vector<double> lhs;
  lhs.reserve(paths.size());
  for (const auto& traj : paths) {
    lhs.push_back(traj.states[sim.s_index()] * skorohod_integral(traj, sim.s_index()));
  }
  return OracleReport::make("adjoint_duality", 1.0, mean(lhs), 3.0 * standard_error(lhs));
}

OracleReport check_kernel(const SuiteOptions& opt) {
  const auto& quartic = lookup("quartic");
  const auto sim = default_sim(opt.seed);
  const auto paths = simulate_ensemble(quartic, sim, 20000);
  const double bandwidths[] = {0.2, 0.1, 0.05};
  const auto ce = conditional_expectation_oracle(paths, 0.5, sim.s_index(), bandwidths);
  const double value = ce.extrapolated.value_or(std::numeric_limits<double>::quiet_NaN());
  return OracleReport::make("kernel_conditional_expectation", quartic.grad(0.5), value, 0.05);
}

OracleReport check_gibbs(const SuiteOptions& opt) {
  const auto& quartic = lookup("quartic");
  const double beta = 4.0;
  const auto samples = gibbs_rejection_sampler(quartic, beta, 100000, opt.seed);
  const auto m = gibbs_moments(quartic, beta);
  const double n = static_cast<double>(samples.size());
  const double se = std::sqrt((m.fourth_central - m.variance * m.variance) / n);
  return OracleReport::make("gibbs_sampler_variance", m.variance, sample_variance(samples),
                            3.0 * se);
}

OracleReport check_scale(const SuiteOptions& opt) {
  const auto& quartic = lookup("quartic");
  const auto sim = default_sim(opt.seed);
  const auto stats = simulate_statistics(quartic, sim, 5000);
  const auto check = scale_invariance_check(stats, 0.4, sim.s(), 7.3);
  return OracleReport::make("scale_invariance", check.ratio_base, check.ratio_scaled,
                            1e-12 * std::abs(check.ratio_base));
}

const std::vector<std::pair<std::string, Check>>& registry() {
  static const std::vector<std::pair<std::string, Check>> checks = {
      {"normalization", check_normalization},
      {"factorization", check_factorization},
      {"malliavin_derivative_vs_ode", check_ode},
      {"d_gamma_vs_third_derivative", check_d_gamma},
      {"ou_conditional_expectation", check_ou},
      {"adjoint_duality", check_adjoint},
      {"kernel_conditional_expectation", check_kernel},
      {"gibbs_sampler_variance", check_gibbs},
      {"scale_invariance", check_scale},
  };
  return checks;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : registry()) out.push_back(name);
  return out;
}

std::vector<OracleReport> run_suite(const SuiteOptions& options) {
  for (const auto& name : options.only) {
    const auto& reg = registry();
    if (std::none_of(reg.begin(), reg.end(), [&](const auto& e) { return e.first == name; })) {
      throw UsageError("unknown oracle check '" + name + "'");
    }
  }
  std::vector<OracleReport> out;
  for (const auto& [name, check] : registry()) {
    if (!options.only.empty() &&
        std::find(options.only.begin(), options.only.end(), name) == options.only.end()) {
      continue;
    }
    out.push_back(check(options));
  }
  return out;
}

void write_report_json(const std::filesystem::path& path, const std::vector<OracleReport>& reports) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : reports) {
    list.push_back({{"name", r.name},
                    {"target", r.target},
                    {"estimate", r.estimate},
                    {"tolerance", r.tolerance},
                    {"passed", r.passed}});
  }
  std::ofstream out(path);
  if (!out) throw RuntimeError("cannot write " + path.string());
  out << list.dump(2) << '\n';
}

}  // namespace mirl::oracle
