#include "mirl/oracle/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mirl/errors.hpp"
#include "mirl/rng.hpp"

namespace mirl::oracle {

OracleReport OracleReport::make(std::string name, double target, double estimate,
                                double tolerance) {
  const bool ok = std::isfinite(estimate) && std::abs(estimate - target) <= tolerance;
  return {std::move(name), target, estimate, tolerance, ok};
}

std::vector<double> ode_malliavin_oracle(const Trajectory& traj, std::size_t s_idx) {
  if (s_idx == 0 || s_idx >= traj.states.size()) throw UsageError("ode oracle: bad s_idx");
  constexpr int kRefine = 4;
  const double dt = traj.dt;
  const double step = dt / kRefine;
  // Hessian at time k*dt + frac*dt, linear between samples.
  auto hess_at = [&](std::size_t k, double frac) {
    if (frac <= 0.0) return traj.hess_obs[k];
    return (1.0 - frac) * traj.hess_obs[k] + frac * traj.hess_obs[k + 1];
  };

  // y[k] = Y_{t_k} with Y_0 = 1.
  std::vector<double> y(s_idx + 1);
  y[0] = 1.0;
  double state = 1.0;
  for (std::size_t k = 0; k < s_idx; ++k) {
    for (int sub = 0; sub < kRefine; ++sub) {
      const double f0 = static_cast<double>(sub) / kRefine;
      const double fm = (sub + 0.5) / kRefine;
      const double f1 = static_cast<double>(sub + 1) / kRefine;
      const double k1 = -hess_at(k, f0) * state;
      const double k2 = -hess_at(k, fm) * (state + 0.5 * step * k1);
      const double k3 = -hess_at(k, fm) * (state + 0.5 * step * k2);
      const double k4 = -hess_at(k, f1) * (state + step * k3);
      state += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    y[k + 1] = state;
  }
  std::vector<double> out(s_idx + 1);
  for (std::size_t k = 0; k <= s_idx; ++k) out[k] = std::sqrt(2.0) * y[s_idx] / y[k];
  return out;
}

std::vector<double> third_derivative_oracle(const Trajectory& traj, std::size_t s_idx,
                                            const Potential& potential) {
  if (!potential.third) {
    throw UsageError("third-derivative oracle: potential '" + potential.name + "' has no L'''");
  }
  if (s_idx == 0 || s_idx >= traj.states.size()) throw UsageError("third oracle: bad s_idx");
  const auto& third = *potential.third;
  const double dt = traj.dt;
  double log_gamma = 0.0;
  for (std::size_t j = 0; j < s_idx; ++j) log_gamma += traj.hess_obs[j] * dt;
  const double gamma = std::exp(log_gamma);

  std::vector<double> out(s_idx + 1, 0.0);
  for (std::size_t k = 0; k < s_idx; ++k) {
    double exponent = 0.0;  // sum_{i=k}^{j-1} h_i dt
    double acc = 0.0;
    for (std::size_t j = k; j < s_idx; ++j) {
      const double d_x = std::sqrt(2.0) * std::exp(-exponent);
      acc += third(traj.states[j]) * d_x * dt;
      exponent += traj.hess_obs[j] * dt;
    }
    out[k] = gamma * acc;
  }
  return out;
}

namespace {

struct Support {
  double lo = 0.0;
  double hi = 0.0;
};

// Interval outside which exp(-beta L) is below e^-60 of its peak, located by a
// coarse scan and then widened by one coarse step on each side.
Support effective_support(const Potential& potential, double beta) {
  constexpr double kRange = 50.0;
  constexpr std::size_t kPoints = 100001;
  const double h = 2.0 * kRange / static_cast<double>(kPoints - 1);
  double peak = -std::numeric_limits<double>::infinity();
  std::vector<double> log_f(kPoints);
  for (std::size_t i = 0; i < kPoints; ++i) {
    log_f[i] = -beta * potential.eval(-kRange + static_cast<double>(i) * h);
    peak = std::max(peak, log_f[i]);
  }
  std::size_t first = kPoints;
  std::size_t last = 0;
  for (std::size_t i = 0; i < kPoints; ++i) {
    if (log_f[i] > peak - 60.0) {
      first = std::min(first, i);
      last = i;
    }
  }
  if (first == kPoints || first == 0 || last + 1 == kPoints) {
    throw DegenerateInput("gibbs oracle: density not confined to [-50, 50]");
  }
  return {-kRange + static_cast<double>(first - 1) * h, -kRange + static_cast<double>(last + 1) * h};
}

}  // namespace

GibbsMoments gibbs_moments(const Potential& potential, double beta) {
  const auto support = effective_support(potential, beta);
  constexpr std::size_t kPoints = 200001;
  const double h = (support.hi - support.lo) / static_cast<double>(kPoints - 1);
  std::vector<double> x(kPoints);
  std::vector<double> log_f(kPoints);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kPoints; ++i) {
    x[i] = support.lo + static_cast<double>(i) * h;
    log_f[i] = -beta * potential.eval(x[i]);
    peak = std::max(peak, log_f[i]);
  }
  auto integrate = [&](auto&& g) {
    double acc = 0.0;
    for (std::size_t i = 0; i < kPoints; ++i) {
      const double w = (i == 0 || i + 1 == kPoints) ? 0.5 : 1.0;
      acc += w * g(x[i]) * std::exp(log_f[i] - peak);
    }
    return acc * h;
  };
  const double z = integrate([](double) { return 1.0; });
  GibbsMoments m;
  m.mean = integrate([](double v) { return v; }) / z;
  m.variance = integrate([&](double v) { return (v - m.mean) * (v - m.mean); }) / z;
  m.fourth_central = integrate([&](double v) {
                       const double d = (v - m.mean) * (v - m.mean);
                       return d * d;
                     }) /
                     z;
  return m;
}

std::vector<double> gibbs_rejection_sampler(const Potential& potential, double beta,
                                            std::size_t n, std::uint64_t seed) {
  if (!(beta > 0.0)) throw UsageError("rejection sampler: beta must be > 0");
  const auto moments = gibbs_moments(potential, beta);
  const double center = moments.mean;
  const double sigma = 1.5 * std::sqrt(moments.variance);
  auto log_envelope = [&](double v) {
    const double z = (v - center) / sigma;
    return -0.5 * z * z;
  };

  // Envelope constant: max of log f - log g over a grid reaching 8 envelope
  // widths, plus a 5% margin for grid resolution.
  const auto support = effective_support(potential, beta);
  const double lo = std::min(support.lo, center - 8.0 * sigma);
  const double hi = std::max(support.hi, center + 8.0 * sigma);
  constexpr std::size_t kPoints = 400001;
  const double h = (hi - lo) / static_cast<double>(kPoints - 1);
  double log_m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kPoints; ++i) {
    const double v = lo + static_cast<double>(i) * h;
    log_m = std::max(log_m, -beta * potential.eval(v) - log_envelope(v));
  }
  log_m += std::log(1.05);

  Engine rng(seed);
  std::normal_distribution<double> proposal(center, sigma);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> out;
  out.reserve(n);
  while (out.size() < n) {
    const double v = proposal(rng);
    const double log_ratio = -beta * potential.eval(v) - log_envelope(v) - log_m;
    if (std::log(unit(rng)) < log_ratio) out.push_back(v);
  }
  return out;
}

ConditionalExpectation conditional_expectation_oracle(std::span<const double> x,
                                                      std::span<const double> grad, double alpha,
                                                      std::span<const double> bandwidths) {
  if (x.size() != grad.size()) throw UsageError("kernel oracle: length mismatch");
  ConditionalExpectation out;
  for (double bw : bandwidths) {
    if (!(bw > 0.0)) throw UsageError("kernel oracle: bandwidths must be > 0");
    long double sw = 0.0L;
    long double swg = 0.0L;
    std::size_t inside = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double z = (x[i] - alpha) / bw;
      if (std::abs(z) > 5.0) continue;
      const long double w = std::exp(-0.5L * z * z);
      sw += w;
      swg += w * grad[i];
      ++inside;
    }
    BandwidthEstimate est{bw, std::numeric_limits<double>::quiet_NaN(), inside == 0};
    if (!est.degenerate) est.value = static_cast<double>(swg / sw);
    out.per_bandwidth.push_back(est);
  }

  // Least squares for value = a + b * bw^2.
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, t0 = 0.0, t1 = 0.0;
  for (const auto& e : out.per_bandwidth) {
    if (e.degenerate) continue;
    const double q = e.bandwidth * e.bandwidth;
    s0 += 1.0;
    s1 += q;
    s2 += q * q;
    t0 += e.value;
    t1 += q * e.value;
  }
  if (s0 == 1.0) {
    out.extrapolated = t0;
  } else if (s0 >= 2.0) {
    const double det = s0 * s2 - s1 * s1;
    out.extrapolated = det != 0.0 ? (s2 * t0 - s1 * t1) / det : t0 / s0;
  }
  return out;
}

ConditionalExpectation conditional_expectation_oracle(std::span<const Trajectory> ensemble,
                                                      double alpha, std::size_t s_idx,
                                                      std::span<const double> bandwidths) {
  std::vector<double> x;
  std::vector<double> g;
  x.reserve(ensemble.size());
  g.reserve(ensemble.size());
  for (const auto& traj : ensemble) {
    x.push_back(traj.states.at(s_idx));
    g.push_back(traj.grad_obs.at(s_idx));
  }
  return conditional_expectation_oracle(x, g, alpha, bandwidths);
}

}  // namespace mirl::oracle
