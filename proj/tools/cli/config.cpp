#include "config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mirl/errors.hpp"
#include "mirl/potentials.hpp"

namespace mirl::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  return d;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  if (v.empty() || v[0] == '-') throw ConfigError(key + ": expected a non-negative integer");
  const unsigned long long n = std::strtoull(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || errno == ERANGE) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  }
  return n;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

}  // namespace

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      {"potential", "quartic", "catalog key of the learner's loss"},
      {"sim.dt", "0.001", "Euler-Maruyama step"},
      {"sim.horizon", "1.0", "episode length T"},
      {"sim.s", "0.8", "conditioning time"},
      {"sim.init", "gaussian", "initial law: gaussian, uniform or point"},
      {"sim.init_mean", "0.0", "gaussian init mean"},
      {"sim.init_std", "1.0", "gaussian init std"},
      {"sim.init_lo", "-1.0", "uniform init lower end"},
      {"sim.init_hi", "1.0", "uniform init upper end"},
      {"sim.init_x", "0.0", "point init location"},
      {"sim.seed", "20240601", "master seed of the episode streams"},
      {"sim.grad_noise_std", "0.0", "std of additive noise on the learner's gradient"},
      {"sim.n_paths", "5000", "episodes for simulate and estimate-gradient"},
      {"chain.eta", "0.05", "outer step size"},
      {"chain.beta", "4.0", "inverse temperature"},
      {"chain.n_steps", "2000", "outer iterations K"},
      {"chain.burn_in", "300", "discarded leading iterations"},
      {"chain.n_paths", "5000", "paths per gradient estimate"},
      {"chain.alpha0", "0.0", "chain start"},
      {"chain.clip", "50.0", "gradient magnitude cap"},
      {"chain.seed", "7", "seed of the chain noise"},
      {"chain.reuse_ensemble", "false", "estimate every step from one shared ensemble"},
      {"chain.degenerate_policy", "hold_last", "hold_last or resample_double"},
      {"chain.max_degenerate_fraction", "0.2", "abort when more steps are degenerate"},
      {"chain.n_bins", "60", "histogram bins for the loss reconstruction"},
      {"estimator.den_guard", "1e-8", "smallest usable |denominator|"},
      {"estimator.min_active_floor", "10", "minimum active paths"},
      {"estimator.min_active_divisor", "1000", "min active = max(floor, N / divisor)"},
      {"estimator.den_min_z", "2.0", "denominator must exceed this many stderr"},
      {"grid.lo", "-1.0", "alpha grid lower end"},
      {"grid.hi", "1.0", "alpha grid upper end"},
      {"grid.count", "21", "alpha grid points"},
      {"outputs", "out", "output directory"},
      {"figures", "grad_sweep,chain_grads,gibbs_hist,loss_recon", "SVGs to emit"},
      {"validate.only", "", "comma list of oracle checks (default all)"},
      {"validate.corrupt_d_gamma", "false", "fault injection: scale d_gamma by 1.5"},
  };
  return table;
}

const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names = {"grad_sweep", "chain_grads", "gibbs_hist",
                                                 "loss_recon"};
  return names;
}

RawConfig::RawConfig() {
  for (const auto& spec : key_table()) values_[spec.key] = spec.default_value;
}

void RawConfig::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second = value;
  explicit_[key] = true;
}

const std::string& RawConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  return it->second;
}

bool RawConfig::explicitly_set(const std::string& key) const { return explicit_.count(key) > 0; }

void RawConfig::merge_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    try {
      set(key, trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void RawConfig::merge_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  merge_text(buf.str(), path.string());
}

std::vector<double> AlphaGrid::points() const { return UniformGrid{lo, hi, count}.points(); }

bool ExperimentConfig::wants_figure(const std::string& name) const {
  return std::find(figures.begin(), figures.end(), name) != figures.end();
}

ExperimentConfig resolve(const RawConfig& raw) {
  ExperimentConfig cfg;
  auto num = [&](const char* k) { return to_double(k, raw.get(k)); };
  auto count = [&](const char* k) { return static_cast<std::size_t>(to_u64(k, raw.get(k))); };

  cfg.potential = raw.get("potential");
  lookup(cfg.potential);

  cfg.sim.dt = num("sim.dt");
  cfg.sim.horizon = num("sim.horizon");
  cfg.sim.s = num("sim.s");
  const std::string init = raw.get("sim.init");
  if (init == "gaussian") {
    cfg.sim.init = GaussianInit{num("sim.init_mean"), num("sim.init_std")};
  } else if (init == "uniform") {
    cfg.sim.init = UniformInit{num("sim.init_lo"), num("sim.init_hi")};
  } else if (init == "point") {
    cfg.sim.init = PointInit{num("sim.init_x")};
  } else {
    throw ConfigError("sim.init: expected gaussian, uniform or point, got '" + init + "'");
  }
  cfg.sim.master_seed = to_u64("sim.seed", raw.get("sim.seed"));
  cfg.sim.grad_noise_std = num("sim.grad_noise_std");
  cfg.n_paths = count("sim.n_paths");
  if (cfg.n_paths == 0) throw ConfigError("sim.n_paths must be positive");

  cfg.chain.eta = num("chain.eta");
  cfg.chain.beta = num("chain.beta");
  cfg.chain.n_steps = count("chain.n_steps");
  cfg.chain.burn_in = count("chain.burn_in");
  cfg.chain.n_paths = count("chain.n_paths");
  cfg.chain.alpha0 = num("chain.alpha0");
  cfg.chain.clip = num("chain.clip");
  cfg.chain.chain_seed = to_u64("chain.seed", raw.get("chain.seed"));
  cfg.chain.reuse_ensemble = to_bool("chain.reuse_ensemble", raw.get("chain.reuse_ensemble"));
  const std::string policy = raw.get("chain.degenerate_policy");
  if (policy == "hold_last") {
    cfg.chain.degenerate_policy = DegeneratePolicy::HoldLast;
  } else if (policy == "resample_double") {
    cfg.chain.degenerate_policy = DegeneratePolicy::ResampleDouble;
  } else {
    throw ConfigError("chain.degenerate_policy: expected hold_last or resample_double");
  }
  cfg.chain.max_degenerate_fraction = num("chain.max_degenerate_fraction");
  cfg.n_bins = count("chain.n_bins");
  if (cfg.n_bins == 0) throw ConfigError("chain.n_bins must be positive");

  cfg.estimator.den_guard = num("estimator.den_guard");
  cfg.estimator.min_active_floor = count("estimator.min_active_floor");
  cfg.estimator.min_active_divisor = count("estimator.min_active_divisor");
  cfg.estimator.den_min_z = num("estimator.den_min_z");
  if (cfg.estimator.min_active_divisor == 0) {
    throw ConfigError("estimator.min_active_divisor must be positive");
  }

  cfg.grid.lo = num("grid.lo");
  cfg.grid.hi = num("grid.hi");
  cfg.grid.count = count("grid.count");
  if (!(cfg.grid.lo < cfg.grid.hi)) throw ConfigError("grid.lo must be below grid.hi");
  if (cfg.grid.count < 2) throw ConfigError("grid.count must be at least 2");

  cfg.outputs = raw.get("outputs");
  if (cfg.outputs.empty()) throw ConfigError("outputs must name a directory");

  cfg.figures = split_list(raw.get("figures"));
  for (const auto& f : cfg.figures) {
    const auto& names = figure_names();
    if (std::find(names.begin(), names.end(), f) == names.end()) {
      throw ConfigError("figures: unknown figure '" + f + "'");
    }
  }

  if (raw.explicitly_set("validate.only")) cfg.validate_only = split_list(raw.get("validate.only"));
  cfg.corrupt_d_gamma = to_bool("validate.corrupt_d_gamma", raw.get("validate.corrupt_d_gamma"));
  return cfg;
}

}  // namespace mirl::cli
