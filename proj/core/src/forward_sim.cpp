#include "mirl/forward_sim.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "mirl/errors.hpp"
#include "mirl/rng.hpp"
#include "parallel.hpp"

namespace mirl {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

// Snaps `value` to the nearest multiple of dt and returns the multiple.
std::size_t snap_to_grid(double& value, double dt, const char* name,
                         std::vector<std::string>& warnings) {
  const auto steps = static_cast<std::size_t>(std::llround(value / dt));
  const double snapped = static_cast<double>(steps) * dt;
  if (std::abs(snapped - value) > 1e-9 * dt) {
    std::ostringstream msg;
    msg.precision(17);
    msg << name << " snapped from " << value << " to " << snapped << " (multiple of dt=" << dt
        << ")";
    warnings.push_back(msg.str());
  }
  value = snapped;
  return steps;
}

double draw_initial(const InitLaw& law, Engine& rng) {
  return std::visit(
      [&rng](const auto& l) -> double {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, GaussianInit>) {
          return std::normal_distribution<double>(l.mean, l.std)(rng);
        } else if constexpr (std::is_same_v<L, UniformInit>) {
          return std::uniform_real_distribution<double>(l.lo, l.hi)(rng);
        } else {
          return l.x;
        }
      },
      law);
}

}  // namespace

std::string describe(const InitLaw& law) {
  std::ostringstream out;
  out.precision(17);
  std::visit(
      [&out](const auto& l) {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, GaussianInit>) {
          out << "gaussian(" << l.mean << ", " << l.std << ")";
        } else if constexpr (std::is_same_v<L, UniformInit>) {
          out << "uniform(" << l.lo << ", " << l.hi << ")";
        } else {
          out << "point(" << l.x << ")";
        }
      },
      law);
  return out.str();
}

SimConfig::SimConfig(SimSettings settings) : settings_(std::move(settings)) {
  auto& st = settings_;
  if (!(std::isfinite(st.dt) && st.dt > 0.0)) throw ConfigError("sim.dt must be > 0");
  if (!(std::isfinite(st.horizon) && st.horizon > 0.0)) {
    throw ConfigError("sim.horizon must be > 0");
  }
  if (!(std::isfinite(st.s) && st.s > 0.0 && st.s <= st.horizon)) {
    throw ConfigError("sim.s must lie in (0, horizon]");
  }
  if (st.dt > st.s) throw ConfigError("sim.dt must not exceed sim.s");
  if (!(std::isfinite(st.grad_noise_std) && st.grad_noise_std >= 0.0)) {
    throw ConfigError("sim.grad_noise_std must be >= 0");
  }
  std::visit(
      [](const auto& l) {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, GaussianInit>) {
          if (!(std::isfinite(l.mean) && std::isfinite(l.std) && l.std >= 0.0)) {
            throw ConfigError("gaussian init needs finite mean and std >= 0");
          }
        } else if constexpr (std::is_same_v<L, UniformInit>) {
          if (!(std::isfinite(l.lo) && std::isfinite(l.hi) && l.lo < l.hi)) {
            throw ConfigError("uniform init needs finite lo < hi");
          }
        } else {
          if (!std::isfinite(l.x)) throw ConfigError("point init must be finite");
        }
      },
      st.init);

  n_steps_ = snap_to_grid(st.horizon, st.dt, "horizon", warnings_);
  s_index_ = snap_to_grid(st.s, st.dt, "s", warnings_);
  if (s_index_ == 0 || s_index_ > n_steps_) {
    throw ConfigError("sim.s must map to a grid index in [1, T/dt]");
  }
}

std::vector<double> recover_increments(std::span<const double> states,
                                       std::span<const double> grad_obs, double dt) {
  if (states.size() != grad_obs.size() || states.empty()) {
    throw UsageError("recover_increments: states and grad_obs must have equal, nonzero length");
  }
  std::vector<double> out(states.size() - 1);
  for (std::size_t k = 0; k + 1 < states.size(); ++k) {
    out[k] = (states[k + 1] - states[k] + grad_obs[k] * dt) / kSqrt2;
  }
  return out;
}

Trajectory make_trajectory(const Potential& potential, std::vector<double> states, double dt,
                           std::size_t episode) {
  if (states.empty()) throw UsageError("make_trajectory: empty state path");
  Trajectory traj;
  traj.episode = episode;
  traj.dt = dt;
  const std::size_t n = states.size();
  traj.times.resize(n);
  traj.grad_obs.resize(n);
  traj.hess_obs.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    traj.times[k] = static_cast<double>(k) * dt;
    traj.grad_obs[k] = potential.grad(states[k]);
    traj.hess_obs[k] = potential.hess(states[k]);
  }
  traj.states = std::move(states);
  traj.increments = recover_increments(traj.states, traj.grad_obs, dt);
  return traj;
}

Trajectory simulate_episode(const Potential& potential, const SimConfig& config,
                            std::size_t episode_index) {
  const std::size_t m = config.n_steps();
  const double dt = config.dt();
  const double noise_scale = kSqrt2 * std::sqrt(dt);
  const double grad_noise = config.grad_noise_std();

  Engine rng = make_stream(config.master_seed(), kEpisodeStream, episode_index);
  std::normal_distribution<double> normal(0.0, 1.0);

  Trajectory traj;
  traj.episode = episode_index;
  traj.dt = dt;
  traj.times.resize(m + 1);
  traj.states.resize(m + 1);
  traj.grad_obs.resize(m + 1);
  traj.hess_obs.resize(m + 1);

  auto observe = [&](std::size_t k, double x) {
    double g = potential.grad(x);
    if (grad_noise > 0.0) g += grad_noise * normal(rng);
    const double h = potential.hess(x);
    if (!std::isfinite(g) || !std::isfinite(h)) throw SimulationBlowup(episode_index, k);
    traj.times[k] = static_cast<double>(k) * dt;
    traj.states[k] = x;
    traj.grad_obs[k] = g;
    traj.hess_obs[k] = h;
  };

  double x = draw_initial(config.init(), rng);
  for (std::size_t k = 0; k < m; ++k) {
    observe(k, x);
    x = x - traj.grad_obs[k] * dt + noise_scale * normal(rng);
    if (!std::isfinite(x)) throw SimulationBlowup(episode_index, k + 1);
  }
  observe(m, x);

  traj.increments = recover_increments(traj.states, traj.grad_obs, dt);
  return traj;
}

std::vector<Trajectory> simulate_ensemble(const Potential& potential, const SimConfig& config,
                                          std::size_t n_paths, std::size_t first_episode) {
  if (n_paths == 0) throw UsageError("simulate_ensemble: n_paths must be >= 1");
  std::vector<Trajectory> out(n_paths);
  detail::parallel_for(n_paths, [&](std::size_t i) {
    out[i] = simulate_episode(potential, config, first_episode + i);
  });
  return out;
}

}  // namespace mirl
