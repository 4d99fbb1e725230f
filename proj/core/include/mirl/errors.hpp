#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mirl {

/// Bad configuration value or unknown catalog key. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Caller violated an API precondition (empty ensemble, bad index, ...).
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Base for failures that only show up while running a computation.
class RuntimeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The Euler-Maruyama state went non-finite; usually dt is too large for
/// the potential's growth.
class SimulationBlowup : public RuntimeError {
public:
  SimulationBlowup(std::size_t episode, std::size_t step)
      : RuntimeError("simulation blow-up in episode " + std::to_string(episode) +
                     " at step " + std::to_string(step) +
                     " (non-finite state; reduce dt)"),
        episode_(episode), step_(step) {}

  std::size_t episode() const noexcept { return episode_; }
  std::size_t step() const noexcept { return step_; }

private:
  std::size_t episode_;
  std::size_t step_;
};

/// An exponent in a Malliavin weight exceeded the double-precision guard.
class NumericalOverflow : public RuntimeError {
public:
  NumericalOverflow(std::size_t episode, const std::string& what)
      : RuntimeError("exponent overflow on path " + std::to_string(episode) + ": " + what +
                     " (try a smaller conditioning time s or horizon T)"),
        episode_(episode) {}

  std::size_t episode() const noexcept { return episode_; }

private:
  std::size_t episode_;
};

/// Histogram or density construction cannot proceed (all samples equal,
/// non-confining potential, grid too narrow).
class DegenerateInput : public RuntimeError {
public:
  using RuntimeError::RuntimeError;
};

/// Too many outer-chain steps produced degenerate gradient estimates.
class ChainAborted : public RuntimeError {
public:
  using RuntimeError::RuntimeError;
};

}  // namespace mirl
