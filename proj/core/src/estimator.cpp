#include "mirl/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mirl/errors.hpp"
#include "mirl/stats.hpp"
#include "parallel.hpp"

namespace mirl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::size_t grid_index(double s, double dt) {
  if (!(dt > 0.0) || !(s > 0.0)) throw UsageError("grid_index: s and dt must be positive");
  const auto idx = static_cast<std::size_t>(std::llround(s / dt));
  if (std::abs(static_cast<double>(idx) * dt - s) > 1e-9 * dt) {
    throw UsageError("conditioning time s is not on the time grid");
  }
  return idx;
}

PathStatistic summarize(const Trajectory& traj, const MalliavinFrame& frame) {
  return {traj.states[frame.s_idx], traj.grad_obs[frame.s_idx], frame.skorohod, frame.inner};
}

std::vector<PathStatistic> path_statistics(std::span<const Trajectory> ensemble,
                                           std::size_t s_idx) {
  std::vector<PathStatistic> out(ensemble.size());
  detail::parallel_for(ensemble.size(), [&](std::size_t i) {
    out[i] = summarize(ensemble[i], build_frame(ensemble[i], s_idx));
  });
  return out;
}

std::vector<PathStatistic> simulate_statistics(const Potential& potential,
                                               const SimConfig& config, std::size_t n_paths,
                                               std::size_t first_episode) {
  if (n_paths == 0) throw UsageError("simulate_statistics: n_paths must be >= 1");
  std::vector<PathStatistic> out(n_paths);
  detail::parallel_for(n_paths, [&](std::size_t i) {
    const auto traj = simulate_episode(potential, config, first_episode + i);
    out[i] = summarize(traj, build_frame(traj, config.s_index()));
  });
  return out;
}

Contribution path_contribution(const PathStatistic& stat, double alpha) {
  if (!(stat.x_s > alpha)) return {};
  return {stat.grad_s * stat.skorohod - stat.inner, stat.skorohod};
}

Contribution path_contribution(const Trajectory& traj, const MalliavinFrame& frame, double alpha) {
  return path_contribution(summarize(traj, frame), alpha);
}

GradientEstimate counterfactual_gradient(std::span<const PathStatistic> stats, double alpha,
                                         double s, const EstimatorOptions& options) {
  if (stats.empty()) throw UsageError("counterfactual_gradient: empty ensemble");
  const std::size_t n = stats.size();

  std::vector<double> num(n);
  std::vector<double> den(n);
  std::size_t active = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = path_contribution(stats[i], alpha);
    num[i] = c.numerator;
    den[i] = c.denominator;
    if (stats[i].x_s > alpha) ++active;
  }

  GradientEstimate est;
  est.alpha = alpha;
  est.s = s;
  est.n_paths = n;
  est.n_active = active;
  est.num_mean = mean(num);
  est.den_mean = mean(den);
  est.num_stderr = standard_error(num);
  est.den_stderr = standard_error(den);
  est.num_den_cov = sample_covariance(num, den) / static_cast<double>(n);

  const std::size_t min_active =
      std::max(options.min_active_floor, n / std::max<std::size_t>(options.min_active_divisor, 1));
  est.degenerate = !(std::abs(est.den_mean) >= options.den_guard) || active < min_active ||
                   !(std::abs(est.den_mean) >= options.den_min_z * est.den_stderr);
  if (est.degenerate) {
    est.ratio = kNaN;
    est.ratio_stderr = kNaN;
    return est;
  }
  est.ratio = est.num_mean / est.den_mean;
  const double r = est.ratio;
  const double var = est.num_stderr * est.num_stderr - 2.0 * r * est.num_den_cov +
                     r * r * est.den_stderr * est.den_stderr;
  est.ratio_stderr = std::sqrt(std::max(var, 0.0)) / std::abs(est.den_mean);
  return est;
}

GradientEstimate counterfactual_gradient(std::span<const Trajectory> ensemble, double alpha,
                                         double s, const EstimatorOptions& options) {
  if (ensemble.empty()) throw UsageError("counterfactual_gradient: empty ensemble");
  const auto stats = path_statistics(ensemble, grid_index(s, ensemble.front().dt));
  return counterfactual_gradient(stats, alpha, s, options);
}

GradientEstimate kernel_gradient(std::span<const PathStatistic> stats, double alpha, double s,
                                 double bandwidth) {
  if (stats.empty()) throw UsageError("kernel_gradient: empty ensemble");
  if (!(bandwidth > 0.0)) throw UsageError("kernel_gradient: bandwidth must be > 0");
  const std::size_t n = stats.size();
  std::vector<double> weights(n);
  std::vector<double> weighted(n);
  std::size_t active = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = (stats[i].x_s - alpha) / bandwidth;
    weights[i] = std::exp(-0.5 * z * z);
    weighted[i] = weights[i] * stats[i].grad_s;
    if (weights[i] > 0.0) ++active;
  }
  GradientEstimate est;
  est.alpha = alpha;
  est.s = s;
  est.n_paths = n;
  est.n_active = active;
  est.den_mean = pairwise_sum(weights) / static_cast<double>(n);
  est.num_mean = pairwise_sum(weighted) / static_cast<double>(n);
  est.degenerate = active == 0 || !(est.den_mean > 0.0);
  est.ratio = est.degenerate ? kNaN : est.num_mean / est.den_mean;
  est.ratio_stderr = kNaN;
  return est;
}

GradientEstimate kernel_gradient(std::span<const Trajectory> ensemble, double alpha, double s,
                                 double bandwidth) {
  if (ensemble.empty()) throw UsageError("kernel_gradient: empty ensemble");
  const std::size_t s_idx = grid_index(s, ensemble.front().dt);
  std::vector<PathStatistic> stats(ensemble.size());
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    if (s_idx >= ensemble[i].states.size()) throw UsageError("kernel_gradient: s beyond path");
    stats[i].x_s = ensemble[i].states[s_idx];
    stats[i].grad_s = ensemble[i].grad_obs[s_idx];
  }
  return kernel_gradient(stats, alpha, s, bandwidth);
}

ScaleCheck scale_invariance_check(std::span<const PathStatistic> stats, double alpha, double s,
                                  double c) {
  if (c == 0.0 || !std::isfinite(c)) throw UsageError("scale factor must be finite and non-zero");
  std::vector<PathStatistic> scaled(stats.begin(), stats.end());
  for (auto& st : scaled) {
    st.skorohod *= c;
    st.inner *= c;
  }
  return {counterfactual_gradient(stats, alpha, s).ratio,
          counterfactual_gradient(scaled, alpha, s).ratio};
}

}  // namespace mirl
