#include "gmm/direction.hpp"

#include <cmath>
#include <stdexcept>

#include "gmm/kernels.hpp"

namespace gmm::direction {

namespace {

using kernels::dot;
using linalg2::Sym2;
using linalg2::Vec2;

// Relative safeguard floor; keeps the shifted matrix solvable even for
// degenerate user-supplied tau.
double effective_tau(double tau, const Sym2& base) {
  return std::max(tau, 1e-13) * std::max(1.0, base.norm_inf());
}

}  // namespace

std::optional<Vec2> solve_subspace(const Sym2& h, double gnorm2, double gts) {
  const Vec2 rhs{gnorm2, -gts};
  const double scale = std::max(1.0, h.norm_inf());
  const auto eig = linalg2::eig_bounds(h);
  if (eig.lambda_min > linalg2::kSpdTolCoeff * scale) {
    return linalg2::solve_spd(h, rhs);
  }
  if (eig.lambda_min >= -linalg2::kRankTolCoeff * scale) {
    return linalg2::solve_min_norm(h, rhs);
  }
  return std::nullopt;  // indefinite: model unbounded below
}

bool gradient_related_test(std::span<const double> d, std::span<const double> g,
                           const GrTestConstants& c) {
  const double gtd = dot(g, d);
  const double gn2 = dot(g, g);
  const double dn2 = dot(d, d);
  return gtd <= -c.c1 * gn2 && dn2 <= (c.c2 * c.c2) * gn2;
}

DirectionOutcome compute_direction(const hk::HkBuildContext& ctx,
                                   const std::optional<Sym2>& h0,
                                   const GrTestConstants& c, double tau,
                                   bool scale_first) {
  const double gnorm2 = dot(ctx.g, ctx.g);
  if (gnorm2 <= 0.0) {
    throw std::invalid_argument("compute_direction: zero gradient");
  }
  const double gnorm = std::sqrt(gnorm2);
  const double snorm = std::sqrt(dot(ctx.s, ctx.s));
  const double gts = dot(ctx.g, ctx.s);

  const bool have_h0 = h0.has_value() && h0->finite();
  const Sym2 base = have_h0 ? *h0 : Sym2::identity();

  DirectionOutcome out;
  out.d.resize(ctx.g.size());

  auto finish = [&](double alpha, double beta, bool safeguarded,
                    const Sym2& h_used) {
    out.alpha = alpha;
    out.beta = beta;
    out.used_safeguard = safeguarded;
    out.H_used = h_used;
    kernels::scaled_sum(out.d, -alpha, ctx.g, beta, ctx.s);
    // At a stationary point of the model, 0.5 u'Hu + b'u = -0.5 rhs'u.
    out.model_decrease = -0.5 * (gnorm2 * alpha - gts * beta);
  };

  // Vanishing momentum: first iteration, or a previous step so small that
  // x_k - x_{k-1} is below the rounding granularity of x_k and carries no
  // information. Fall back to the 1-D safeguarded gradient step; any model
  // built from such an s measured only rounding noise, so it is discarded.
  const double xnorm = std::sqrt(dot(ctx.x, ctx.x));
  if (snorm <= std::max(linalg2::kDegeneracyTol, 1e-14 * xnorm)) {
    const double tau_eff = effective_tau(tau, Sym2::identity());
    const double h11 = std::max(1.0, tau_eff);
    finish(1.0 / h11, 0.0, true, Sym2{h11 * gnorm2, 0.0, 0.0});
    return out;
  }

  if (have_h0) {
    if (const auto u = solve_subspace(base, gnorm2, gts)) {
      kernels::scaled_sum(out.d, -(*u)[0], ctx.g, (*u)[1], ctx.s);
      if (gradient_related_test(out.d, ctx.g, c)) {
        finish((*u)[0], (*u)[1], false, base);
        return out;
      }
    }
  }

  // Safeguard: eigenvalue shift plus diag(||g||, ||s||) congruence. The
  // system is solved in the scaled variables w = D u, which keeps the solve
  // conditioned like hhat itself.
  Sym2 pre = base;
  if (scale_first) {
    pre = Sym2{base.h11 / gnorm2, base.h12 / (gnorm * snorm),
               base.h22 / (snorm * snorm)};
    if (!pre.finite()) pre = Sym2::identity();
  }
  const double tau_eff = effective_tau(tau, pre);
  const Sym2 hhat = linalg2::modified_cholesky(pre, tau_eff);
  const auto w = linalg2::solve_spd(hhat, Vec2{gnorm, -gts / snorm});
  // SPD holds by construction; a failed solve here would be a logic error.
  if (!w) throw std::logic_error("compute_direction: safeguarded solve failed");
  const auto h_used = linalg2::scale_congruence(hhat, {gnorm, snorm});
  finish((*w)[0] / gnorm, (*w)[1] / snorm, true,
         h_used ? *h_used : Sym2::identity());
  return out;
}

}  // namespace gmm::direction
