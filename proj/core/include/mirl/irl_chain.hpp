#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mirl/estimator.hpp"
#include "mirl/forward_sim.hpp"
#include "mirl/potentials.hpp"
#include "mirl/rng.hpp"
#include "mirl/stats.hpp"

namespace mirl {

/// What the outer chain does when the gradient estimate is degenerate.
enum class DegeneratePolicy {
  HoldLast,        ///< reuse the last valid gradient (0 before the first one)
  ResampleDouble,  ///< re-estimate once with 2N fresh paths, then hold
};

struct ChainConfig {
  double eta = 0.05;              ///< outer step size
  double beta = 4.0;              ///< inverse temperature
  std::size_t n_steps = 2000;     ///< K
  std::size_t burn_in = 300;      ///< k-hat
  std::size_t n_paths = 5000;     ///< N, paths per gradient estimate
  double alpha0 = 0.0;
  double clip = 50.0;             ///< cap on |gradient| before the update
  std::uint64_t chain_seed = 7;
  /// Estimate every step's gradient from one shared ensemble instead of a
  /// fresh one. Much faster, but the per-step errors become correlated.
  bool reuse_ensemble = false;
  DegeneratePolicy degenerate_policy = DegeneratePolicy::HoldLast;
  double max_degenerate_fraction = 0.2;

  /// Throws ConfigError unless 0 <= burn_in < n_steps, eta, beta, clip > 0.
  void validate() const;
};

struct StepRecord {
  double alpha = 0.0;          ///< alpha_k, where the gradient was estimated
  double ratio = 0.0;          ///< raw estimate (NaN when degenerate)
  double gradient_used = 0.0;  ///< after degeneracy policy and clipping
  bool degenerate = false;
  bool clipped = false;
};

struct ChainRun {
  std::vector<double> samples;   ///< alpha_0 .. alpha_K
  std::vector<double> retained;  ///< alpha_{k+1} for k in [burn_in, K)
  std::vector<StepRecord> grad_log;
  std::size_t degenerate_count = 0;
  std::size_t clip_count = 0;
};

/// Carried between chain steps for the degeneracy policy.
struct ChainState {
  std::optional<double> last_valid_gradient;
};

struct StepResult {
  double alpha_next = 0.0;
  double gradient_used = 0.0;
  bool clipped = false;
};

/// alpha - eta * gradient + sqrt(2 eta / beta) * w.
double langevin_update(double alpha, double gradient, double eta, double beta, double w);

/// One outer update with w ~ N(0, 1) from `rng`. Degenerate estimates fall
/// back to the last valid gradient; |gradient| is clipped at config.clip.
StepResult chain_step(double alpha_k, const GradientEstimate& grad_hat, const ChainConfig& config,
                      Engine& rng, ChainState& state);

/// Full passive Langevin chain. Throws ChainAborted when more than
/// max_degenerate_fraction of the steps were degenerate.
ChainRun run_irl(const Potential& potential, const SimConfig& sim, const ChainConfig& chain,
                 const EstimatorOptions& options = {});

struct LossReconstruction {
  double beta = 1.0;
  std::vector<double> bin_edges;               ///< n_bins + 1 edges
  std::vector<std::size_t> counts;
  std::vector<double> density;                 ///< integrates to 1
  std::vector<std::optional<double>> loss_hat; ///< empty bins have no value
  double align_offset = 0.0;

  std::size_t n_bins() const noexcept { return density.size(); }
  double bin_center(std::size_t b) const noexcept {
    return 0.5 * (bin_edges[b] + bin_edges[b + 1]);
  }
};

/// Equal-width histogram over [min, max] of the samples and
/// loss_hat = -log(density) / beta, shifted so its minimum is 0.
/// Throws DegenerateInput if all samples are identical.
LossReconstruction reconstruct_loss(std::span<const double> retained, double beta,
                                    std::size_t n_bins);

/// Largest |loss_hat - (L - min L)| over bins holding at least
/// `min_fraction` of the samples; L is evaluated at bin centers and its
/// minimum is taken over the same bins.
double loss_sup_error(const LossReconstruction& recon, const Potential& potential,
                      double min_fraction);

/// exp(-beta L) / Z on the grid, Z by composite Simpson. Throws
/// DegenerateInput when the endpoint density exceeds 1e-12 (grid too narrow
/// or L not confining).
std::vector<double> gibbs_density(const Potential& potential, double beta, const UniformGrid& grid);

/// Kolmogorov-Smirnov distance between the empirical CDF of `samples` and
/// the CDF of a density tabulated on `grid` (cumulative trapezoid).
double distribution_distance(std::span<const double> samples,
                             std::span<const double> reference_density, const UniformGrid& grid);

}  // namespace mirl
