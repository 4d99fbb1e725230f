#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mirl/forward_sim.hpp"
#include "mirl/malliavin.hpp"

namespace mirl {

/// The four per-path scalars the ratio estimator needs. Keeping only these
/// lets large ensembles be streamed instead of stored.
struct PathStatistic {
  double x_s = 0.0;       ///< X at the conditioning time
  double grad_s = 0.0;    ///< observed L'(X_s)
  double skorohod = 0.0;  ///< S(u)
  double inner = 0.0;     ///< <D L'(X_s), u>
};

PathStatistic summarize(const Trajectory& traj, const MalliavinFrame& frame);

/// Frames are built and immediately reduced to statistics.
std::vector<PathStatistic> path_statistics(std::span<const Trajectory> ensemble,
                                           std::size_t s_idx);

/// Simulates episodes first_episode .. first_episode + n_paths - 1 and
/// reduces each to its statistic without keeping the trajectory.
std::vector<PathStatistic> simulate_statistics(const Potential& potential,
                                               const SimConfig& config, std::size_t n_paths,
                                               std::size_t first_episode = 0);

struct Contribution {
  double numerator = 0.0;
  double denominator = 0.0;
};

/// n_i = 1{X_s > alpha} (L'(X_s) S(u) - <D L'(X_s), u>), d_i = 1{X_s > alpha} S(u).
/// The indicator is strict: X_s == alpha contributes nothing.
Contribution path_contribution(const PathStatistic& stat, double alpha);
Contribution path_contribution(const Trajectory& traj, const MalliavinFrame& frame, double alpha);

struct EstimatorOptions {
  double den_guard = 1e-8;
  std::size_t min_active_floor = 10;
  std::size_t min_active_divisor = 1000;  ///< min_active = max(floor, N / divisor)
  /// The denominator must differ from zero by this many standard errors.
  /// Below that the ratio is noise over noise (e.g. alpha left of almost
  /// every X_s, where the indicator is always on and E[S(u)] = 0).
  double den_min_z = 2.0;
};

struct GradientEstimate {
  double alpha = 0.0;
  double s = 0.0;
  std::size_t n_paths = 0;
  double num_mean = 0.0;
  double den_mean = 0.0;
  double num_stderr = 0.0;
  double den_stderr = 0.0;
  double num_den_cov = 0.0;  ///< covariance of the two means
  double ratio = 0.0;        ///< NaN when degenerate
  double ratio_stderr = 0.0; ///< delta-method propagation; NaN when degenerate
  bool degenerate = false;
  std::size_t n_active = 0;
};

/// Malliavin ratio estimate of L'(alpha) = E[L'(X_s) | X_s = alpha].
/// Degeneracy (tiny denominator or too few active paths) is reported via the
/// flag, not thrown. Throws UsageError on an empty ensemble.
GradientEstimate counterfactual_gradient(std::span<const PathStatistic> stats, double alpha,
                                         double s, const EstimatorOptions& options = {});

/// Convenience overload; `s` must lie on the trajectories' time grid.
GradientEstimate counterfactual_gradient(std::span<const Trajectory> ensemble, double alpha,
                                         double s, const EstimatorOptions& options = {});

/// Nadaraya-Watson baseline with a Gaussian kernel of width `bandwidth`.
/// Only ratio, n_paths and degenerate are meaningful; n_active counts paths
/// with non-zero weight.
GradientEstimate kernel_gradient(std::span<const PathStatistic> stats, double alpha, double s,
                                 double bandwidth);
GradientEstimate kernel_gradient(std::span<const Trajectory> ensemble, double alpha, double s,
                                 double bandwidth);

struct ScaleCheck {
  double ratio_base = 0.0;
  double ratio_scaled = 0.0;
};

/// Re-runs the estimate with u replaced by c * u (so S(u) and the inner
/// product both scale by c). The ratio must not change.
ScaleCheck scale_invariance_check(std::span<const PathStatistic> stats, double alpha, double s,
                                  double c);

/// Index of `s` on a grid of spacing dt; throws UsageError if off-grid.
std::size_t grid_index(double s, double dt);

}  // namespace mirl
