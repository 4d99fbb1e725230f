#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "mirl/forward_sim.hpp"

namespace mirl {

/// Exponents beyond this magnitude (natural-log units) are treated as
/// overflow.
inline constexpr double kExponentGuard = 700.0;

/// Pathwise Malliavin quantities for a fixed conditioning index s_idx.
///
/// Arrays are indexed k = 0..s_idx. Time integrals are left-Riemann sums,
/// so integrals over [0, s] run over k < s_idx. The weight u is supported
/// on [0, s] and scaled by 1/(sqrt(2) s), which makes
/// sum_k d_xs[k] u[k] dt equal to 1.
struct MalliavinFrame {
  std::size_t s_idx = 0;
  std::vector<double> d_xs;     ///< D_{t_k} X_s
  std::vector<double> u;        ///< Skorohod weight u_{t_k}
  double gamma = 1.0;           ///< anticipative factor, u = gamma * v
  std::vector<double> v;        ///< adapted factor v_{t_k}
  std::vector<double> d_gamma;  ///< D_{t_k} gamma, from observables only
  double skorohod = 0.0;        ///< S(u)
  double inner = 0.0;           ///< <D L'(X_s), u>
  bool degenerate = false;      ///< some d_xs underflowed to zero
};

/// D_{t_k} X_s = sqrt(2) exp(-sum_{j=k}^{s_idx-1} h_j dt). Equals sqrt(2)
/// at k = s_idx. Throws NumericalOverflow if an exponent exceeds +700.
std::vector<double> malliavin_derivative(const Trajectory& traj, std::size_t s_idx);

/// u_{t_k} = exp(+sum_{j=k}^{s_idx-1} h_j dt) / (sqrt(2) s).
std::vector<double> weight_u(const Trajectory& traj, std::size_t s_idx);

struct GammaV {
  double gamma = 1.0;
  std::vector<double> v;
};

/// gamma = exp(sum_{j<s_idx} h_j dt), v_{t_k} = exp(-sum_{j<k} h_j dt) / (sqrt(2) s).
GammaV gamma_and_v(const Trajectory& traj, std::size_t s_idx);

/// D_{t_k} gamma without L''': the third derivative is replaced by the
/// pathwise increment dL'(X) - L''(X) dX.
std::vector<double> d_gamma(const Trajectory& traj, std::size_t s_idx);

/// S(u) = gamma * sum_{k<s_idx} v_k dW_k - sum_{k<s_idx} D_{t_k}gamma v_k dt.
double skorohod_integral(const Trajectory& traj, std::size_t s_idx);

/// <D L'(X_s), u> = h_{s_idx} * sum_{k<s_idx} d_xs[k] u[k] dt.
double inner_product(const Trajectory& traj, std::size_t s_idx);

/// All of the above in a single O(M) pass over the path.
MalliavinFrame build_frame(const Trajectory& traj, std::size_t s_idx);

/// Debug dump with header `k,t,d_xs,u,v,d_gamma`.
void write_frame_csv(const std::filesystem::path& path, const Trajectory& traj,
                     const MalliavinFrame& frame);

}  // namespace mirl
