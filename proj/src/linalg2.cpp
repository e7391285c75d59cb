#include "gmm/linalg2.hpp"

#include <algorithm>
#include <cmath>

namespace gmm::linalg2 {

double Sym2::norm_inf() const {
  return std::max(std::fabs(h11) + std::fabs(h12),
                  std::fabs(h12) + std::fabs(h22));
}

bool Sym2::finite() const {
  return std::isfinite(h11) && std::isfinite(h12) && std::isfinite(h22);
}

EigBounds eig_bounds(const Sym2& h) {
  const double mid = 0.5 * (h.h11 + h.h22);
  const double radius = 0.5 * std::hypot(h.h11 - h.h22, 2.0 * h.h12);
  return {mid - radius, mid + radius};
}

std::optional<Vec2> solve_spd(const Sym2& h, const Vec2& rhs) {
  const double spd_tol = kSpdTolCoeff * std::max(1.0, h.norm_inf());
  if (eig_bounds(h).lambda_min <= spd_tol) return std::nullopt;
  if (h.h12 == 0.0) {
    return Vec2{rhs[0] / h.h11, rhs[1] / h.h22};
  }
  // 2x2 Cholesky; both pivots are positive for SPD input.
  const double l11 = std::sqrt(h.h11);
  const double l21 = h.h12 / l11;
  const double l22 = std::sqrt(h.h22 - l21 * l21);
  const double z1 = rhs[0] / l11;
  const double z2 = (rhs[1] - l21 * z1) / l22;
  const double u2 = z2 / l22;
  const double u1 = (z1 - l21 * u2) / l11;
  return Vec2{u1, u2};
}

std::optional<Vec2> solve_min_norm(const Sym2& h, const Vec2& rhs) {
  const double scale = std::max(1.0, h.norm_inf());
  const double rank_tol = kRankTolCoeff * scale;
  const auto [lmin, lmax] = eig_bounds(h);

  // Spectral pseudoinverse applied to rhs, dropping eigenvalues below the
  // rank cutoff.
  Vec2 u{0.0, 0.0};
  auto accumulate = [&](double lambda, const Vec2& v) {
    if (lambda <= rank_tol) return;
    const double coeff = (v[0] * rhs[0] + v[1] * rhs[1]) / lambda;
    u[0] += coeff * v[0];
    u[1] += coeff * v[1];
  };

  // Unit eigenvector for a given eigenvalue: a nonzero row of (H - lambda I)
  // rotated by 90 degrees.
  auto eigvec = [&](double lambda) -> Vec2 {
    const double a = h.h11 - lambda;
    const double c = h.h22 - lambda;
    const double r1 = std::hypot(a, h.h12);
    const double r2 = std::hypot(h.h12, c);
    Vec2 v;
    if (r1 >= r2 && r1 > 0.0) {
      v = {-h.h12 / r1, a / r1};
    } else if (r2 > 0.0) {
      v = {-c / r2, h.h12 / r2};
    } else {
      v = {1.0, 0.0};  // H == lambda * I; any direction works
    }
    return v;
  };

  if (std::fabs(h.h12) == 0.0 && h.h11 == h.h22) {
    // Scalar matrix: both eigenvectors are the coordinate axes.
    accumulate(h.h11, {1.0, 0.0});
    accumulate(h.h22, {0.0, 1.0});
  } else {
    const Vec2 vmax = eigvec(lmax);
    accumulate(lmax, vmax);
    accumulate(lmin, {-vmax[1], vmax[0]});
  }

  const double r0 = h.h11 * u[0] + h.h12 * u[1] - rhs[0];
  const double r1 = h.h12 * u[0] + h.h22 * u[1] - rhs[1];
  const double rhs_scale = std::max(1.0, std::max(std::fabs(rhs[0]), std::fabs(rhs[1])));
  if (std::max(std::fabs(r0), std::fabs(r1)) > rank_tol * rhs_scale) {
    return std::nullopt;
  }
  return u;
}

Sym2 modified_cholesky(const Sym2& h0, double tau) {
  const double lmin = eig_bounds(h0).lambda_min;
  if (lmin >= tau) return h0;
  const double shift = tau - lmin;
  return {h0.h11 + shift, h0.h12, h0.h22 + shift};
}

std::optional<Sym2> scale_congruence(const Sym2& hhat, const ScalePair& d) {
  if (d.gnorm <= kDegeneracyTol || d.snorm <= kDegeneracyTol) {
    return std::nullopt;
  }
  return Sym2{d.gnorm * d.gnorm * hhat.h11, d.gnorm * d.snorm * hhat.h12,
              d.snorm * d.snorm * hhat.h22};
}

}  // namespace gmm::linalg2
