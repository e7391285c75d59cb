#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gmm/hk.hpp"
#include "gmm/linalg2.hpp"

namespace gmm::direction {

/// Constants of the gradient-related acceptance test.
struct GrTestConstants {
  double c1 = 1e-6;
  double c2 = 1e6;
};

struct DirectionOutcome {
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<double> d;          // -alpha * g + beta * s
  bool used_safeguard = false;
  double model_decrease = 0.0;    // quadratic model value at the solution
  linalg2::Sym2 H_used{};
};

/// Minimize 0.5 u'Hu + [-gnorm2, gts]'u. SPD solve when possible, minimum
/// norm solve for the semidefinite case (linearly dependent g, s), nullopt
/// when the model is unbounded below.
std::optional<linalg2::Vec2> solve_subspace(const linalg2::Sym2& h,
                                            double gnorm2, double gts);

/// True iff g'd <= -c1 ||g||^2 and ||d|| <= c2 ||g||.
bool gradient_related_test(std::span<const double> d, std::span<const double> g,
                           const GrTestConstants& c);

/// One direction computation: try the raw model and the acceptance test,
/// otherwise rebuild through the minimal eigenvalue shift plus the
/// diag(||g||, ||s||) congruence and solve that (no re-test). A vanishing s
/// (first iteration) degenerates to a safeguarded scaled gradient step.
/// `tau` is a relative floor: the shift target is tau * max(1, ||H0||_inf).
/// `scale_first` applies the eigenvalue shift after the inverse congruence
/// instead of before (non-default variant).
DirectionOutcome compute_direction(const hk::HkBuildContext& ctx,
                                   const std::optional<linalg2::Sym2>& h0,
                                   const GrTestConstants& c, double tau,
                                   bool scale_first = false);

}  // namespace gmm::direction
