#include "gmm/linesearch.hpp"

#include <stdexcept>

#include "gmm/kernels.hpp"

namespace gmm::linesearch {

NonmonotoneState zh_update(const NonmonotoneState& st, double f_new,
                           double eta_zh) {
  NonmonotoneState next;
  next.Q = eta_zh * st.Q + 1.0;
  next.C = (eta_zh * st.Q * st.C + f_new) / next.Q;
  return next;
}

LineSearchResult armijo(const problems::ObjectiveFunction& p,
                        std::span<const double> x, std::span<const double> d,
                        std::span<const double> g, double f_ref,
                        const LineSearchConfig& cfg) {
  const double gtd = kernels::dot(g, d);
  if (!(gtd < 0.0)) {
    throw std::invalid_argument("armijo: direction is not a descent direction");
  }

  LineSearchResult res;
  res.x_new.resize(x.size());

  double eta = 1.0;
  for (int j = 0; j <= cfg.max_backtracks; ++j) {
    kernels::scaled_sum(res.x_new, 1.0, x, eta, d);
    const double f_trial = p.value(res.x_new);
    ++res.f_evals;
    if (f_trial <= f_ref + cfg.gamma * eta * gtd) {
      res.success = true;
      res.eta = eta;
      res.f_new = f_trial;
      res.backtracks = j;
      return res;
    }
    eta *= cfg.delta;
  }
  res.backtracks = cfg.max_backtracks + 1;
  return res;
}

}  // namespace gmm::linesearch
