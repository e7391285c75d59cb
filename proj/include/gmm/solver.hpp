#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gmm/direction.hpp"
#include "gmm/linesearch.hpp"
#include "gmm/problems.hpp"

namespace gmm::solver {

enum class HkStrategy { interp, fd_hvp, diag_bb };

enum class RunStatus {
  Converged,
  MaxIters,
  LineSearchFailure,
  TimeLimit,
  NumericalError,
};

struct SolverConfig {
  double tol_grad_inf = 1e-6;
  long max_iters = 1000000;
  HkStrategy hk_strategy = HkStrategy::interp;
  direction::GrTestConstants gr_constants{};
  linesearch::LineSearchConfig ls{};
  double tau = 1e-8;            // relative safeguard floor coefficient
  bool mc_scale_first = false;  // shift after the inverse scaling (variant)
  std::optional<double> time_limit_s;
  bool collect_trace = false;
};

/// One completed iteration: state at its start plus the step taken.
struct IterTrace {
  long k = 0;
  double f = 0.0;
  double gnorm_inf = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double eta = 0.0;
  int backtracks = 0;
  bool used_safeguard = false;
};

struct RunRecord {
  std::string problem;
  int n = 0;
  std::string solver;
  RunStatus status = RunStatus::NumericalError;
  long iters = 0;
  long f_evals = 0;
  long g_evals = 0;
  double final_f = 0.0;
  double final_gnorm_inf = 0.0;
  std::vector<double> final_x;
  double wall_time_s = 0.0;
  // Shares of the totals consumed by the model-matrix strategy; used by the
  // evaluation accounting audit.
  long hk_f_evals = 0;
  long hk_g_evals = 0;
  std::vector<IterTrace> trace;
};

/// Momentum gradient method: direction from the 2-D quadratic model over
/// span{-g, s}, gradient-related safeguard, backtracking line search.
RunRecord gmm_solve(const problems::ObjectiveFunction& p,
                    std::span<const double> x0, const SolverConfig& cfg);

RunRecord steepest_descent_solve(const problems::ObjectiveFunction& p,
                                 std::span<const double> x0,
                                 const SolverConfig& cfg);

/// Nonlinear conjugate gradient with the nonnegative Polak-Ribiere
/// coefficient and restart on non-descent directions.
RunRecord cg_solve(const problems::ObjectiveFunction& p,
                   std::span<const double> x0, const SolverConfig& cfg);

/// Limited-memory quasi-Newton (two-loop recursion), curvature-guarded pairs.
RunRecord lbfgs_solve(const problems::ObjectiveFunction& p,
                      std::span<const double> x0, const SolverConfig& cfg,
                      int memory = 10);

const std::vector<std::string>& solver_labels();  // gmm, sd, cg, lbfgs
RunRecord solve_by_label(const std::string& label,
                         const problems::ObjectiveFunction& p,
                         std::span<const double> x0, const SolverConfig& cfg);

std::string_view status_name(RunStatus s);
std::optional<RunStatus> status_from_name(std::string_view name);
std::string_view strategy_name(HkStrategy s);
std::optional<HkStrategy> strategy_from_name(std::string_view name);

}  // namespace gmm::solver
