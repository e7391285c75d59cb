#pragma once

#include <span>
#include <vector>

#include "gmm/problems.hpp"

namespace gmm::linesearch {

struct LineSearchConfig {
  double gamma = 1e-5;       // sufficient-decrease constant
  double delta = 0.5;        // backtracking factor
  int max_backtracks = 60;   // ~1e-18 smallest step at delta = 0.5
  bool nonmonotone = true;
  double eta_zh = 0.85;      // reference-value memory weight
};

/// Weighted-average reference value for the nonmonotone acceptance rule.
struct NonmonotoneState {
  double C = 0.0;
  double Q = 1.0;
};

/// C' = (eta * Q * C + f_new) / (eta * Q + 1), Q' = eta * Q + 1.
NonmonotoneState zh_update(const NonmonotoneState& st, double f_new,
                           double eta_zh);

struct LineSearchResult {
  bool success = false;
  double eta = 0.0;
  std::vector<double> x_new;
  double f_new = 0.0;
  int backtracks = 0;
  int f_evals = 0;
};

/// Backtracking sufficient-decrease search from the unit step: accepts the
/// first eta = delta^j with f(x + eta d) <= f_ref + gamma * eta * g'd.
/// Requires g'd < 0 (throws std::invalid_argument otherwise). Exhausting
/// max_backtracks reports failure rather than throwing.
LineSearchResult armijo(const problems::ObjectiveFunction& p,
                        std::span<const double> x, std::span<const double> d,
                        std::span<const double> g, double f_ref,
                        const LineSearchConfig& cfg);

}  // namespace gmm::linesearch
