#include "mirl/irl_chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mirl/errors.hpp"

namespace mirl {

void ChainConfig::validate() const {
  if (!(std::isfinite(eta) && eta > 0.0)) throw ConfigError("chain.eta must be > 0");
  if (!(std::isfinite(beta) && beta > 0.0)) throw ConfigError("chain.beta must be > 0");
  if (!(std::isfinite(clip) && clip > 0.0)) throw ConfigError("chain.clip must be > 0");
  if (n_steps == 0) throw ConfigError("chain.n_steps must be >= 1");
  if (burn_in >= n_steps) throw ConfigError("chain.burn_in must be < chain.n_steps");
  if (n_paths == 0) throw ConfigError("chain.n_paths must be >= 1");
  if (!std::isfinite(alpha0)) throw ConfigError("chain.alpha0 must be finite");
  if (!(max_degenerate_fraction >= 0.0 && max_degenerate_fraction <= 1.0)) {
    throw ConfigError("chain.max_degenerate_fraction must lie in [0, 1]");
  }
}

double langevin_update(double alpha, double gradient, double eta, double beta, double w) {
  return alpha - eta * gradient + std::sqrt(2.0 * eta / beta) * w;
}

StepResult chain_step(double alpha_k, const GradientEstimate& grad_hat, const ChainConfig& config,
                      Engine& rng, ChainState& state) {
  double gradient = 0.0;
  if (!grad_hat.degenerate) {
    gradient = grad_hat.ratio;
    state.last_valid_gradient = gradient;
  } else {
    gradient = state.last_valid_gradient.value_or(0.0);
  }
  StepResult out;
  out.clipped = std::abs(gradient) > config.clip;
  if (out.clipped) gradient = std::copysign(config.clip, gradient);
  out.gradient_used = gradient;
  const double w = std::normal_distribution<double>(0.0, 1.0)(rng);
  out.alpha_next = langevin_update(alpha_k, gradient, config.eta, config.beta, w);
  return out;
}

ChainRun run_irl(const Potential& potential, const SimConfig& sim, const ChainConfig& chain,
                 const EstimatorOptions& options) {
  chain.validate();
  const std::size_t n = chain.n_paths;
  Engine rng = make_stream(chain.chain_seed, kChainStream, 0);

  std::vector<PathStatistic> shared;
  if (chain.reuse_ensemble) shared = simulate_statistics(potential, sim, n, 0);

  std::optional<SimConfig> resample_sim;
  if (chain.degenerate_policy == DegeneratePolicy::ResampleDouble) {
    auto settings = sim.settings();
    settings.master_seed ^= kResampleStream;
    resample_sim.emplace(settings);
  }

  const auto max_degenerate = static_cast<std::size_t>(
      std::floor(chain.max_degenerate_fraction * static_cast<double>(chain.n_steps)));

  ChainRun run;
  run.samples.reserve(chain.n_steps + 1);
  run.grad_log.reserve(chain.n_steps);
  run.samples.push_back(chain.alpha0);
  ChainState state;
  double alpha = chain.alpha0;

  for (std::size_t k = 0; k < chain.n_steps; ++k) {
    GradientEstimate est;
    if (chain.reuse_ensemble) {
      est = counterfactual_gradient(shared, alpha, sim.s(), options);
    } else {
      const auto fresh = simulate_statistics(potential, sim, n, k * n);
      est = counterfactual_gradient(fresh, alpha, sim.s(), options);
    }
    if (est.degenerate && resample_sim) {
      const auto more = simulate_statistics(potential, *resample_sim, 2 * n, k * 2 * n);
      est = counterfactual_gradient(more, alpha, sim.s(), options);
    }

    StepRecord rec;
    rec.alpha = alpha;
    rec.ratio = est.ratio;
    rec.degenerate = est.degenerate;
    const auto step = chain_step(alpha, est, chain, rng, state);
    rec.gradient_used = step.gradient_used;
    rec.clipped = step.clipped;
    run.grad_log.push_back(rec);

    if (rec.degenerate) ++run.degenerate_count;
    if (rec.clipped) ++run.clip_count;
    if (run.degenerate_count > max_degenerate) {
      throw ChainAborted("more than " + std::to_string(max_degenerate) + " of " +
                         std::to_string(chain.n_steps) +
                         " gradient estimates were degenerate; revisit s, N or the init law");
    }

    alpha = step.alpha_next;
    if (!std::isfinite(alpha)) throw RuntimeError("outer chain diverged at step " + std::to_string(k));
    run.samples.push_back(alpha);
  }

  run.retained.assign(run.samples.begin() + static_cast<std::ptrdiff_t>(chain.burn_in) + 1,
                      run.samples.end());
  return run;
}

LossReconstruction reconstruct_loss(std::span<const double> retained, double beta,
                                    std::size_t n_bins) {
  if (retained.empty()) throw UsageError("reconstruct_loss: no samples");
  if (n_bins < 2) throw UsageError("reconstruct_loss: need at least 2 bins");
  if (!(beta > 0.0)) throw UsageError("reconstruct_loss: beta must be > 0");
  const auto [lo_it, hi_it] = std::minmax_element(retained.begin(), retained.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) throw DegenerateInput("reconstruct_loss: all samples are identical");

  LossReconstruction out;
  out.beta = beta;
  const double width = (hi - lo) / static_cast<double>(n_bins);
  out.bin_edges.resize(n_bins + 1);
  for (std::size_t b = 0; b <= n_bins; ++b) out.bin_edges[b] = lo + static_cast<double>(b) * width;
  out.bin_edges[n_bins] = hi;

  out.counts.assign(n_bins, 0);
  for (double x : retained) {
    auto b = static_cast<std::size_t>((x - lo) / width);
    out.counts[std::min(b, n_bins - 1)] += 1;
  }

  const double total = static_cast<double>(retained.size());
  out.density.resize(n_bins);
  out.loss_hat.assign(n_bins, std::nullopt);
  double min_loss = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < n_bins; ++b) {
    out.density[b] = static_cast<double>(out.counts[b]) / (total * width);
    if (out.counts[b] > 0) {
      const double l = -std::log(out.density[b]) / beta;
      out.loss_hat[b] = l;
      min_loss = std::min(min_loss, l);
    }
  }
  out.align_offset = -min_loss;
  for (auto& l : out.loss_hat) {
    if (l) *l += out.align_offset;
  }
  return out;
}

double loss_sup_error(const LossReconstruction& recon, const Potential& potential,
                      double min_fraction) {
  std::size_t total = 0;
  for (auto c : recon.counts) total += c;
  const double threshold = min_fraction * static_cast<double>(total);

  std::vector<std::size_t> bins;
  double min_l = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < recon.n_bins(); ++b) {
    if (recon.loss_hat[b] && static_cast<double>(recon.counts[b]) >= threshold) {
      bins.push_back(b);
      min_l = std::min(min_l, potential.eval(recon.bin_center(b)));
    }
  }
  if (bins.empty()) throw DegenerateInput("loss_sup_error: no bin reaches the count threshold");
  double worst = 0.0;
  for (auto b : bins) {
    const double target = potential.eval(recon.bin_center(b)) - min_l;
    worst = std::max(worst, std::abs(*recon.loss_hat[b] - target));
  }
  return worst;
}

namespace {

// Composite Simpson; an odd number of intervals closes with the 3/8 rule.
double simpson(std::span<const double> f, double h) {
  const std::size_t intervals = f.size() - 1;
  if (intervals == 1) return 0.5 * h * (f[0] + f[1]);
  std::size_t even = intervals % 2 == 0 ? intervals : intervals - 3;
  double acc = 0.0;
  for (std::size_t i = 0; i + 2 <= even; i += 2) acc += f[i] + 4.0 * f[i + 1] + f[i + 2];
  acc *= h / 3.0;
  if (even != intervals) {
    const std::size_t i = even;
    acc += 3.0 * h / 8.0 * (f[i] + 3.0 * f[i + 1] + 3.0 * f[i + 2] + f[i + 3]);
  }
  return acc;
}

}  // namespace

std::vector<double> gibbs_density(const Potential& potential, double beta,
                                  const UniformGrid& grid) {
  grid.validate();
  if (!(beta > 0.0)) throw UsageError("gibbs_density: beta must be > 0");
  std::vector<double> log_f(grid.count);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.count; ++i) {
    log_f[i] = -beta * potential.eval(grid.at(i));
    if (!std::isfinite(log_f[i])) throw DegenerateInput("gibbs_density: non-finite potential");
    peak = std::max(peak, log_f[i]);
  }
  std::vector<double> f(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) f[i] = std::exp(log_f[i] - peak);
  const double z = simpson(f, grid.step());
  for (auto& v : f) v /= z;

  constexpr double kTail = 1e-12;
  if (f.front() > kTail || f.back() > kTail) {
    throw DegenerateInput(
        "gibbs_density: endpoint density above 1e-12; grid too narrow or potential not "
        "confining (exp(-beta L) not integrable)");
  }
  return f;
}

double distribution_distance(std::span<const double> samples,
                             std::span<const double> reference_density, const UniformGrid& grid) {
  grid.validate();
  if (samples.empty()) throw UsageError("distribution_distance: no samples");
  if (reference_density.size() != grid.count) {
    throw UsageError("distribution_distance: density and grid sizes differ");
  }
  const double h = grid.step();
  std::vector<double> cdf(grid.count, 0.0);
  for (std::size_t i = 1; i < grid.count; ++i) {
    cdf[i] = cdf[i - 1] + 0.5 * h * (reference_density[i - 1] + reference_density[i]);
  }
  const double total = cdf.back();
  if (!(total > 0.0)) throw UsageError("distribution_distance: reference density has no mass");
  for (auto& c : cdf) c /= total;

  auto reference_cdf = [&](double x) {
    if (x <= grid.lo) return 0.0;
    if (x >= grid.hi) return 1.0;
    const double pos = (x - grid.lo) / h;
    const auto i = std::min(static_cast<std::size_t>(pos), grid.count - 2);
    const double frac = pos - static_cast<double>(i);
    return cdf[i] + frac * (cdf[i + 1] - cdf[i]);
  };

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = reference_cdf(sorted[i]);
    ks = std::max({ks, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return ks;
}

}  // namespace mirl
