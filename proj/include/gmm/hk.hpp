#pragma once

#include <span>

#include "gmm/linalg2.hpp"
#include "gmm/problems.hpp"

namespace gmm::hk {

/// Per-iteration data the model-matrix strategies draw from. Spans alias the
/// solver's state and stay valid for the duration of the call.
struct HkBuildContext {
  std::span<const double> x;  // current iterate
  std::span<const double> g;  // gradient at x
  std::span<const double> s;  // previous step x_k - x_{k-1} (zero at k = 0)
  std::span<const double> y;  // gradient difference g_k - g_{k-1}
  double f_curr = 0.0;
  double f_prev = 0.0;
  double alpha_prev = 0.0;  // previous subproblem solution
  double beta_prev = 0.0;
};

enum class HkFailure { none, degenerate_input, singular_system };

struct HkResult {
  linalg2::Sym2 H{};
  int f_evals_used = 0;
  int g_evals_used = 0;
  HkFailure failure = HkFailure::none;

  bool ok() const { return failure == HkFailure::none; }
};

inline constexpr double kPointTol = 1e-12;
inline constexpr double kMuMinDefault = 1e-10;
inline constexpr double kMuMaxDefault = 1e10;

/// Default probe length sqrt(machine_eps) * (1 + ||x||_inf).
double fd_hvp_default_step(std::span<const double> x);

/// Model matrix from two finite-difference Hessian-vector probes along g and
/// s; costs two gradient evaluations. The off-diagonal entry averages the two
/// one-sided estimates so the result is exactly symmetric.
HkResult hk_fd_hvp(const problems::ObjectiveFunction& p,
                   const HkBuildContext& ctx, double xi);

/// Model matrix interpolating the objective at (0,-1), (alpha_prev, 0) and
/// (alpha_prev, beta_prev) in the (alpha,beta) plane. The first point reuses
/// f_prev, so only two function evaluations are charged. Fails with
/// singular_system when the points degenerate (no evaluations charged).
HkResult hk_interpolation(const problems::ObjectiveFunction& p,
                          const HkBuildContext& ctx);

/// Model matrix from a diagonal secant fit: componentwise quotients y_i/s_i
/// clipped into [mu_min, mu_max], identity fallback where s_i vanishes. Free
/// of extra evaluations.
HkResult hk_diagonal_bb(const HkBuildContext& ctx,
                        double mu_min = kMuMinDefault,
                        double mu_max = kMuMaxDefault);

}  // namespace gmm::hk
