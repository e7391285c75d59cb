#pragma once

#include <array>
#include <optional>

namespace gmm::linalg2 {

using Vec2 = std::array<double, 2>;

/// Symmetric 2x2 matrix; only the upper triangle is stored.
struct Sym2 {
  double h11 = 0.0;
  double h12 = 0.0;
  double h22 = 0.0;

  static Sym2 identity() { return {1.0, 0.0, 1.0}; }
  double norm_inf() const;
  bool finite() const;
};

/// Gradient / step norms forming the scaling matrix diag(gnorm, snorm).
struct ScalePair {
  double gnorm = 0.0;
  double snorm = 0.0;
};

struct EigBounds {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

inline constexpr double kSpdTolCoeff = 1e-14;
inline constexpr double kRankTolCoeff = 1e-10;
inline constexpr double kTauCoeff = 1e-8;
inline constexpr double kDegeneracyTol = 1e-300;

/// Closed-form eigenvalues of a symmetric 2x2 matrix, lambda_min <= lambda_max.
EigBounds eig_bounds(const Sym2& h);

/// Solve H u = rhs for symmetric positive definite H (Cholesky). Returns
/// nullopt when lambda_min(H) <= 1e-14 * max(1, ||H||_inf), signalling the
/// caller to take the safeguard path.
std::optional<Vec2> solve_spd(const Sym2& h, const Vec2& rhs);

/// Minimum-norm solution of H u = rhs for positive semidefinite H. Returns
/// nullopt when rhs is not in range(H) within the rank tolerance.
std::optional<Vec2> solve_min_norm(const Sym2& h, const Vec2& rhs);

/// Minimal diagonal shift making the smallest eigenvalue at least tau:
/// H + max(0, tau - lambda_min(H)) * I. Input returned unchanged when it
/// already satisfies the bound.
Sym2 modified_cholesky(const Sym2& h0, double tau);

/// Congruence D H D with D = diag(gnorm, snorm). Returns nullopt when a scale
/// is below the degeneracy floor (exact-zero guard only).
std::optional<Sym2> scale_congruence(const Sym2& hhat, const ScalePair& d);

}  // namespace gmm::linalg2
