#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mirl/forward_sim.hpp"
#include "mirl/potentials.hpp"

// Brute-force reference routines. None of these share numerical code with
// the production modules they check.
namespace mirl::oracle {

struct OracleReport {
  std::string name;
  double target = 0.0;
  double estimate = 0.0;
  double tolerance = 0.0;
  bool passed = false;

  /// passed <=> |estimate - target| <= tolerance
  static OracleReport make(std::string name, double target, double estimate, double tolerance);
};

/// Solves dY/dt = -L''(X_t) Y along the stored path with classical RK4 on a
/// 4x refined grid (Hessian linearly interpolated between samples) and
/// returns sqrt(2) Y_s / Y_{t_k} for k = 0..s_idx.
std::vector<double> ode_malliavin_oracle(const Trajectory& traj, std::size_t s_idx);

/// D_{t_k} gamma evaluated directly with the catalog third derivative,
/// gamma * sum_{j=k}^{s-1} L'''(X_j) D_{t_k} X_{t_j} dt, in O(M^2).
/// Throws UsageError if the potential carries no third derivative.
std::vector<double> third_derivative_oracle(const Trajectory& traj, std::size_t s_idx,
                                            const Potential& potential);

/// Exact draws from exp(-beta L) / Z by rejection against a Gaussian
/// envelope whose constant comes from a grid search.
std::vector<double> gibbs_rejection_sampler(const Potential& potential, double beta,
                                            std::size_t n, std::uint64_t seed);

/// Mean and variance of exp(-beta L) / Z by dense trapezoid quadrature.
struct GibbsMoments {
  double mean = 0.0;
  double variance = 0.0;
  double fourth_central = 0.0;
};
GibbsMoments gibbs_moments(const Potential& potential, double beta);

struct BandwidthEstimate {
  double bandwidth = 0.0;
  double value = 0.0;
  bool degenerate = false;
};

struct ConditionalExpectation {
  std::vector<BandwidthEstimate> per_bandwidth;
  /// Value at bandwidth 0 from a least-squares fit of a + b * bw^2 over the
  /// non-degenerate bandwidths; empty if all are degenerate.
  std::optional<double> extrapolated;
};

/// Kernel regression of grad on x at `alpha` for each bandwidth, using a
/// Gaussian kernel truncated at 5 bandwidths. A bandwidth with no sample
/// inside the truncated support is degenerate.
ConditionalExpectation conditional_expectation_oracle(std::span<const double> x,
                                                      std::span<const double> grad, double alpha,
                                                      std::span<const double> bandwidths);
ConditionalExpectation conditional_expectation_oracle(std::span<const Trajectory> ensemble,
                                                      double alpha, std::size_t s_idx,
                                                      std::span<const double> bandwidths);

// ---------------------------------------------------------------------------
// Validation suite behind `mirl validate`.

struct SuiteOptions {
  /// Checks to run; empty means all. Unknown names throw UsageError.
  std::vector<std::string> only;
  std::uint64_t seed = 20240601;
  /// Scales the production d_gamma by 1.5 before comparing, to show that
  /// the third-derivative check catches a broken implementation.
  bool corrupt_d_gamma = false;
};

std::vector<std::string> suite_names();

std::vector<OracleReport> run_suite(const SuiteOptions& options);

void write_report_json(const std::filesystem::path& path, const std::vector<OracleReport>& reports);

}  // namespace mirl::oracle
