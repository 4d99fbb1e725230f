#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mirl/potentials.hpp"

namespace mirl {

struct GaussianInit {
  double mean = 0.0;
  double std = 1.0;
};

struct UniformInit {
  double lo = -1.0;
  double hi = 1.0;
};

struct PointInit {
  double x = 0.0;
};

/// Law of the re-initialization draw at the start of every episode.
using InitLaw = std::variant<GaussianInit, UniformInit, PointInit>;

std::string describe(const InitLaw& law);

/// User-facing simulation knobs, before validation.
struct SimSettings {
  double dt = 1e-3;
  double horizon = 1.0;  ///< episode length T
  double s = 0.8;        ///< conditioning time
  InitLaw init = GaussianInit{};
  std::uint64_t master_seed = 20240601;
  /// Std of additive noise on the learner's gradient (the noisy-gradient
  /// SGLD variant). The noisy value drives the update and is what gets
  /// observed, so the update identity still holds.
  double grad_noise_std = 0.0;
};

/// Validated simulation configuration.
///
/// Episodes are fixed-length: episode i covers [0, T] on the grid
/// t_k = k * dt, k = 0..M. T and s are snapped to the grid; any snap larger
/// than a rounding error is recorded in warnings().
class SimConfig {
public:
  /// Throws ConfigError unless 0 < dt <= s <= T and the init law is sane.
  explicit SimConfig(SimSettings settings = {});

  double dt() const noexcept { return settings_.dt; }
  double horizon() const noexcept { return settings_.horizon; }
  double s() const noexcept { return settings_.s; }
  std::size_t n_steps() const noexcept { return n_steps_; }
  std::size_t s_index() const noexcept { return s_index_; }
  const InitLaw& init() const noexcept { return settings_.init; }
  std::uint64_t master_seed() const noexcept { return settings_.master_seed; }
  double grad_noise_std() const noexcept { return settings_.grad_noise_std; }
  const SimSettings& settings() const noexcept { return settings_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

private:
  SimSettings settings_;
  std::size_t n_steps_ = 0;
  std::size_t s_index_ = 0;
  std::vector<std::string> warnings_;
};

/// One observed episode of the forward learner.
///
/// Only X, L'(X) and L''(X) are observables. `increments[k]` is the
/// Brownian increment W(t_{k+1}) - W(t_k) reconstructed from them, so that
///   states[k+1] = states[k] - grad_obs[k] * dt + sqrt(2) * increments[k].
struct Trajectory {
  std::size_t episode = 0;
  double dt = 0.0;
  std::vector<double> times;       ///< M + 1 grid times
  std::vector<double> states;      ///< M + 1 states
  std::vector<double> grad_obs;    ///< M + 1 observed gradients
  std::vector<double> hess_obs;    ///< M + 1 observed Hessians
  std::vector<double> increments;  ///< M reconstructed increments

  std::size_t n_steps() const noexcept { return increments.size(); }
};

/// Delta W_k = (X_{k+1} - X_k + g_k dt) / sqrt(2), k = 0..M-1.
std::vector<double> recover_increments(std::span<const double> states,
                                       std::span<const double> grad_obs, double dt);

/// Wraps a hand-made state path: evaluates L', L'' on it and recovers the
/// increments. Used for file round-trips and tests.
Trajectory make_trajectory(const Potential& potential, std::vector<double> states, double dt,
                           std::size_t episode = 0);

/// Euler-Maruyama episode of dX = -L'(X) dt + sqrt(2) dW from a fresh init
/// draw. Randomness comes from the (master_seed, episode_index) stream.
/// Throws SimulationBlowup on a non-finite state.
Trajectory simulate_episode(const Potential& potential, const SimConfig& config,
                            std::size_t episode_index);

/// Episodes first_episode .. first_episode + n_paths - 1. Output is
/// identical for any thread count.
std::vector<Trajectory> simulate_ensemble(const Potential& potential, const SimConfig& config,
                                          std::size_t n_paths, std::size_t first_episode = 0);

}  // namespace mirl
