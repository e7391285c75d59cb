#include "gmm/hk.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "gmm/kernels.hpp"

namespace gmm::hk {

namespace {

using kernels::dot;
using kernels::norm_inf;
using kernels::scaled_sum;

// 3x3 Gaussian elimination with partial pivoting; nullopt when a pivot falls
// below tol.
std::optional<std::array<double, 3>> solve3(std::array<std::array<double, 3>, 3> m,
                                            std::array<double, 3> rhs,
                                            double tol) {
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
    }
    if (std::fabs(m[piv][col]) <= tol) return std::nullopt;
    std::swap(m[col], m[piv]);
    std::swap(rhs[col], rhs[piv]);
    for (int r = col + 1; r < 3; ++r) {
      const double factor = m[r][col] / m[col][col];
      for (int c = col; c < 3; ++c) m[r][c] -= factor * m[col][c];
      rhs[r] -= factor * rhs[col];
    }
  }
  std::array<double, 3> u{};
  for (int r = 2; r >= 0; --r) {
    double acc = rhs[r];
    for (int c = r + 1; c < 3; ++c) acc -= m[r][c] * u[c];
    u[r] = acc / m[r][r];
  }
  return u;
}

bool degenerate_norms(const HkBuildContext& ctx, double& gnorm, double& snorm) {
  gnorm = std::sqrt(dot(ctx.g, ctx.g));
  snorm = std::sqrt(dot(ctx.s, ctx.s));
  return gnorm <= linalg2::kDegeneracyTol || snorm <= linalg2::kDegeneracyTol;
}

}  // namespace

double fd_hvp_default_step(std::span<const double> x) {
  constexpr double sqrt_eps = 1.4901161193847656e-8;
  return sqrt_eps * (1.0 + norm_inf(x));
}

HkResult hk_fd_hvp(const problems::ObjectiveFunction& p,
                   const HkBuildContext& ctx, double xi) {
  HkResult out;
  double gnorm = 0.0, snorm = 0.0;
  if (degenerate_norms(ctx, gnorm, snorm)) {
    out.failure = HkFailure::degenerate_input;
    return out;
  }

  const std::size_t n = ctx.x.size();
  std::vector<double> probe(n);
  std::vector<double> grad_probe(n);
  std::vector<double> diff(n);

  // Probe along g: gradient at x + (xi/||g||) g, difference scaled by
  // ||g||/xi approximates (Hessian) g.
  scaled_sum(probe, 1.0, ctx.x, xi / gnorm, ctx.g);
  p.gradient(probe, grad_probe);
  scaled_sum(diff, 1.0, grad_probe, -1.0, ctx.g);
  const double scale_g = gnorm / xi;
  const double g_hg = dot(ctx.g, diff) * scale_g;
  const double s_hg = dot(ctx.s, diff) * scale_g;

  // Probe along s.
  scaled_sum(probe, 1.0, ctx.x, xi / snorm, ctx.s);
  p.gradient(probe, grad_probe);
  scaled_sum(diff, 1.0, grad_probe, -1.0, ctx.g);
  const double scale_s = snorm / xi;
  const double s_hs = dot(ctx.s, diff) * scale_s;
  const double g_hs = dot(ctx.g, diff) * scale_s;

  out.H.h11 = g_hg;
  out.H.h22 = s_hs;
  out.H.h12 = -0.5 * (g_hs + s_hg);
  out.g_evals_used = 2;
  return out;
}

HkResult hk_interpolation(const problems::ObjectiveFunction& p,
                          const HkBuildContext& ctx) {
  HkResult out;
  double gnorm = 0.0, snorm = 0.0;
  if (degenerate_norms(ctx, gnorm, snorm)) {
    out.failure = HkFailure::degenerate_input;
    return out;
  }
  const double a = ctx.alpha_prev;
  const double b = ctx.beta_prev;
  if (std::fabs(a) <= kPointTol || std::fabs(b) <= kPointTol) {
    out.failure = HkFailure::singular_system;
    return out;
  }

  // Interpolation points (0,-1), (a,0), (a,b); rows are
  // 0.5 * [alpha^2, 2 alpha beta, beta^2]. Rows are equilibrated to unit
  // infinity norm so the rank guard is insensitive to the wildly different
  // point magnitudes the previous iteration can produce.
  const std::array<std::array<double, 2>, 3> pts{{{0.0, -1.0}, {a, 0.0}, {a, b}}};
  std::array<std::array<double, 3>, 3> m{};
  std::array<double, 3> row_scale{};
  for (int r = 0; r < 3; ++r) {
    const auto ri = static_cast<std::size_t>(r);
    const double al = pts[ri][0];
    const double be = pts[ri][1];
    m[ri] = {0.5 * al * al, al * be, 0.5 * be * be};
    double row = 0.0;
    for (double v : m[ri]) row = std::max(row, std::fabs(v));
    if (row == 0.0 || !std::isfinite(row)) {
      out.failure = HkFailure::singular_system;
      return out;
    }
    row_scale[ri] = 1.0 / row;
    for (double& v : m[ri]) v *= row_scale[ri];
  }
  const double sys_tol = 1e-12;  // equilibrated matrix has unit norm

  // Regularity depends only on the points; confirm it before paying for any
  // function evaluations.
  if (!solve3(m, {0.0, 0.0, 0.0}, sys_tol).has_value()) {
    out.failure = HkFailure::singular_system;
    return out;
  }

  const double gnorm2 = dot(ctx.g, ctx.g);
  const double gts = dot(ctx.g, ctx.s);
  const std::size_t n = ctx.x.size();
  std::vector<double> pt(n);

  auto sample = [&](double alpha, double beta) {
    scaled_sum(pt, 1.0, ctx.x, -alpha, ctx.g);
    scaled_sum(pt, 1.0, pt, beta, ctx.s);
    return p.value(pt);
  };

  // Row (0,-1) reuses the previous objective value: x - (-1) * (-s) walks
  // back to the previous iterate.
  std::array<double, 3> rhs{};
  rhs[0] = (ctx.f_prev - ctx.f_curr + gts) * row_scale[0];
  rhs[1] = (sample(a, 0.0) - ctx.f_curr + a * gnorm2) * row_scale[1];
  rhs[2] = (sample(a, b) - ctx.f_curr + a * gnorm2 - b * gts) * row_scale[2];
  out.f_evals_used = 2;

  const auto sol = solve3(m, rhs, sys_tol);
  if (!sol) {
    out.failure = HkFailure::singular_system;
    return out;
  }
  out.H.h11 = (*sol)[0];
  out.H.h12 = (*sol)[1];
  out.H.h22 = (*sol)[2];
  return out;
}

HkResult hk_diagonal_bb(const HkBuildContext& ctx, double mu_min,
                        double mu_max) {
  HkResult out;
  double gnorm = 0.0, snorm = 0.0;
  if (degenerate_norms(ctx, gnorm, snorm)) {
    out.failure = HkFailure::degenerate_input;
    return out;
  }
  const double comp_tol = 1e-12 * (1.0 + norm_inf(ctx.s));
  const auto mom = kernels::bb_moments(ctx.g, ctx.s, ctx.y, mu_min, mu_max,
                                       comp_tol);
  out.H.h11 = mom.gg;
  out.H.h12 = -mom.gs;
  out.H.h22 = mom.ss;
  return out;
}

}  // namespace gmm::hk
