#include "mirl/malliavin.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "mirl/errors.hpp"

namespace mirl {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

void check_index(const Trajectory& traj, std::size_t s_idx) {
  if (s_idx == 0 || s_idx > traj.n_steps()) {
    throw UsageError("conditioning index " + std::to_string(s_idx) + " outside (0, " +
                     std::to_string(traj.n_steps()) + "]");
  }
  if (traj.hess_obs.size() != traj.states.size() || traj.grad_obs.size() != traj.states.size()) {
    throw UsageError("trajectory arrays have inconsistent lengths");
  }
}

// cum[k] = sum_{j<k} h_j dt for k = 0..s_idx.
std::vector<double> hessian_prefix(const Trajectory& traj, std::size_t s_idx) {
  std::vector<double> cum(s_idx + 1);
  cum[0] = 0.0;
  for (std::size_t k = 0; k < s_idx; ++k) cum[k + 1] = cum[k] + traj.hess_obs[k] * traj.dt;
  return cum;
}

double guarded_exp(double exponent, const Trajectory& traj, const char* what) {
  if (exponent > kExponentGuard) throw NumericalOverflow(traj.episode, what);
  return std::exp(exponent);
}

double weight_scale(const Trajectory& traj, std::size_t s_idx) {
  const double s = static_cast<double>(s_idx) * traj.dt;
  return 1.0 / (kSqrt2 * s);
}

std::vector<double> derivative_from_prefix(const Trajectory& traj, const std::vector<double>& cum,
                                           bool* underflow) {
  const std::size_t s_idx = cum.size() - 1;
  std::vector<double> out(s_idx + 1);
  for (std::size_t k = 0; k <= s_idx; ++k) {
    const double exponent = -(cum[s_idx] - cum[k]);
    if (underflow != nullptr && exponent < -kExponentGuard) *underflow = true;
    out[k] = kSqrt2 * guarded_exp(exponent, traj, "D_t X_s");
  }
  return out;
}

std::vector<double> weight_from_prefix(const Trajectory& traj, const std::vector<double>& cum) {
  const std::size_t s_idx = cum.size() - 1;
  const double scale = weight_scale(traj, s_idx);
  std::vector<double> out(s_idx + 1);
  for (std::size_t k = 0; k <= s_idx; ++k) {
    out[k] = scale * guarded_exp(cum[s_idx] - cum[k], traj, "weight u");
  }
  return out;
}

GammaV gamma_v_from_prefix(const Trajectory& traj, const std::vector<double>& cum) {
  const std::size_t s_idx = cum.size() - 1;
  const double scale = weight_scale(traj, s_idx);
  GammaV out;
  out.gamma = guarded_exp(cum[s_idx], traj, "gamma");
  out.v.resize(s_idx + 1);
  for (std::size_t k = 0; k <= s_idx; ++k) {
    out.v[k] = scale * guarded_exp(-cum[k], traj, "adapted factor v");
  }
  return out;
}

// D_{t_k} gamma / (sqrt(2) gamma) = sum_{j=k}^{s-1} exp(-sum_{i=k}^{j-1} h_i dt) c_j with
// c_j = (g_{j+1} - g_j) - h_j (X_{j+1} - X_j), accumulated backwards so that no
// intermediate exponential can overflow.
std::vector<double> d_gamma_with(const Trajectory& traj, std::size_t s_idx, double gamma) {
  std::vector<double> out(s_idx + 1);
  double tail = 0.0;
  out[s_idx] = 0.0;
  for (std::size_t k = s_idx; k-- > 0;) {
    const double c = (traj.grad_obs[k + 1] - traj.grad_obs[k]) -
                     traj.hess_obs[k] * (traj.states[k + 1] - traj.states[k]);
    tail = c + std::exp(-traj.hess_obs[k] * traj.dt) * tail;
    out[k] = kSqrt2 * gamma * tail;
  }
  return out;
}

double skorohod_from(const Trajectory& traj, std::size_t s_idx, double gamma,
                     const std::vector<double>& v, const std::vector<double>& dgamma) {
  double ito = 0.0;
  double correction = 0.0;
  for (std::size_t k = 0; k < s_idx; ++k) {
    ito += v[k] * traj.increments[k];
    correction += dgamma[k] * v[k];
  }
  return gamma * ito - correction * traj.dt;
}

double inner_from(const Trajectory& traj, std::size_t s_idx, const std::vector<double>& d_xs,
                  const std::vector<double>& u) {
  double acc = 0.0;
  for (std::size_t k = 0; k < s_idx; ++k) acc += d_xs[k] * u[k];
  return traj.hess_obs[s_idx] * acc * traj.dt;
}

}  // namespace

std::vector<double> malliavin_derivative(const Trajectory& traj, std::size_t s_idx) {
  check_index(traj, s_idx);
  return derivative_from_prefix(traj, hessian_prefix(traj, s_idx), nullptr);
}

std::vector<double> weight_u(const Trajectory& traj, std::size_t s_idx) {
  check_index(traj, s_idx);
  return weight_from_prefix(traj, hessian_prefix(traj, s_idx));
}

GammaV gamma_and_v(const Trajectory& traj, std::size_t s_idx) {
  check_index(traj, s_idx);
  return gamma_v_from_prefix(traj, hessian_prefix(traj, s_idx));
}

std::vector<double> d_gamma(const Trajectory& traj, std::size_t s_idx) {
  check_index(traj, s_idx);
  const auto cum = hessian_prefix(traj, s_idx);
  return d_gamma_with(traj, s_idx, guarded_exp(cum[s_idx], traj, "gamma"));
}

double skorohod_integral(const Trajectory& traj, std::size_t s_idx) {
  check_index(traj, s_idx);
  const auto gv = gamma_v_from_prefix(traj, hessian_prefix(traj, s_idx));
  return skorohod_from(traj, s_idx, gv.gamma, gv.v, d_gamma_with(traj, s_idx, gv.gamma));
}

double inner_product(const Trajectory& traj, std::size_t s_idx) {
  check_index(traj, s_idx);
  const auto cum = hessian_prefix(traj, s_idx);
  return inner_from(traj, s_idx, derivative_from_prefix(traj, cum, nullptr),
                    weight_from_prefix(traj, cum));
}

MalliavinFrame build_frame(const Trajectory& traj, std::size_t s_idx) {
  check_index(traj, s_idx);
  const auto cum = hessian_prefix(traj, s_idx);
  MalliavinFrame frame;
  frame.s_idx = s_idx;
  frame.d_xs = derivative_from_prefix(traj, cum, &frame.degenerate);
  frame.u = weight_from_prefix(traj, cum);
  auto gv = gamma_v_from_prefix(traj, cum);
  frame.gamma = gv.gamma;
  frame.v = std::move(gv.v);
  frame.d_gamma = d_gamma_with(traj, s_idx, frame.gamma);
  frame.skorohod = skorohod_from(traj, s_idx, frame.gamma, frame.v, frame.d_gamma);
  frame.inner = inner_from(traj, s_idx, frame.d_xs, frame.u);
  return frame;
}

void write_frame_csv(const std::filesystem::path& path, const Trajectory& traj,
                     const MalliavinFrame& frame) {
  std::ofstream out(path);
  if (!out) throw RuntimeError("cannot open " + path.string() + " for writing");
  out << "k,t,d_xs,u,v,d_gamma\n";
  char buf[160];
  for (std::size_t k = 0; k <= frame.s_idx; ++k) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n", k, traj.times[k],
                  frame.d_xs[k], frame.u[k], frame.v[k], frame.d_gamma[k]);
    out << buf;
  }
}

}  // namespace mirl
