#include "gmm/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstddef>
#include <deque>
#include <stdexcept>

#include "gmm/hk.hpp"
#include "gmm/kernels.hpp"

namespace gmm::solver {

namespace {

using kernels::dot;
using kernels::norm_inf;
using kernels::scaled_sum;
using linalg2::Sym2;

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Shared driver state for all solvers.
struct Loop {
  const problems::ObjectiveFunction& p;
  const SolverConfig& cfg;
  RunRecord rec;
  Stopwatch clock;

  std::vector<double> x, g;
  double f = 0.0;
  double gnorm_inf = 0.0;
  linesearch::NonmonotoneState nm{};
  bool done = false;

  Loop(const problems::ObjectiveFunction& prob, std::span<const double> x0,
       const SolverConfig& config, std::string solver_label)
      : p(prob), cfg(config) {
    rec.problem = p.name();
    rec.n = p.dim();
    rec.solver = std::move(solver_label);
    x.assign(x0.begin(), x0.end());
    g.resize(x.size());
    f = p.value(x);
    p.gradient(x, g);
    rec.f_evals = 1;
    rec.g_evals = 1;
    nm = {f, 1.0};
  }

  void finish(RunStatus status) {
    rec.status = status;
    rec.final_f = f;
    rec.final_gnorm_inf = gnorm_inf;
    rec.final_x = x;
    rec.wall_time_s = clock.seconds();
    done = true;
  }

  // Convergence, caps and sanity checks at the top of each iteration.
  bool stop_checks() {
    gnorm_inf = norm_inf(g);
    if (!std::isfinite(f) || !std::isfinite(gnorm_inf)) {
      finish(RunStatus::NumericalError);
    } else if (gnorm_inf <= cfg.tol_grad_inf) {
      finish(RunStatus::Converged);
    } else if (rec.iters >= cfg.max_iters) {
      finish(RunStatus::MaxIters);
    } else if (cfg.time_limit_s && clock.seconds() > *cfg.time_limit_s) {
      finish(RunStatus::TimeLimit);
    }
    return done;
  }

  double f_ref() const { return cfg.ls.nonmonotone ? nm.C : f; }

  // Line search plus state update; returns false when the run ended.
  bool step(std::span<const double> d, const IterTrace& partial,
            std::vector<double>* s_out = nullptr,
            std::vector<double>* y_out = nullptr) {
    auto ls = linesearch::armijo(p, x, d, g, f_ref(), cfg.ls);
    rec.f_evals += ls.f_evals;
    if (!ls.success) {
      finish(RunStatus::LineSearchFailure);
      return false;
    }
    if (s_out) scaled_sum(*s_out, 1.0, ls.x_new, -1.0, x);
    x = std::move(ls.x_new);
    f = ls.f_new;
    std::vector<double> g_new(x.size());
    p.gradient(x, g_new);
    ++rec.g_evals;
    if (y_out) scaled_sum(*y_out, 1.0, g_new, -1.0, g);
    g = std::move(g_new);
    if (cfg.ls.nonmonotone) nm = linesearch::zh_update(nm, f, cfg.ls.eta_zh);

    if (cfg.collect_trace) {
      IterTrace t = partial;
      t.k = rec.iters;
      t.eta = ls.eta;
      t.backtracks = ls.backtracks;
      rec.trace.push_back(t);
    }
    ++rec.iters;
    last_eta = ls.eta;
    return true;
  }

  double last_eta = 1.0;
};

std::optional<Sym2> build_model(const problems::ObjectiveFunction& p,
                                const hk::HkBuildContext& ctx,
                                HkStrategy strategy, RunRecord& rec) {
  auto charge = [&rec](const hk::HkResult& r) {
    rec.f_evals += r.f_evals_used;
    rec.g_evals += r.g_evals_used;
    rec.hk_f_evals += r.f_evals_used;
    rec.hk_g_evals += r.g_evals_used;
  };
  switch (strategy) {
    case HkStrategy::interp: {
      auto r = hk::hk_interpolation(p, ctx);
      charge(r);
      if (r.ok()) return r.H;
      // Unusable interpolation points (first iterations, duplicated points):
      // fall back to the zero-cost secant model before the safeguard.
      auto r2 = hk::hk_diagonal_bb(ctx);
      charge(r2);
      if (r2.ok()) return r2.H;
      return std::nullopt;
    }
    case HkStrategy::fd_hvp: {
      auto r = hk::hk_fd_hvp(p, ctx, hk::fd_hvp_default_step(ctx.x));
      charge(r);
      if (r.ok()) return r.H;
      return std::nullopt;
    }
    case HkStrategy::diag_bb: {
      auto r = hk::hk_diagonal_bb(ctx);
      charge(r);
      if (r.ok()) return r.H;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

RunRecord gmm_solve(const problems::ObjectiveFunction& p,
                    std::span<const double> x0, const SolverConfig& cfg) {
  Loop loop(p, x0, cfg, "gmm");
  const std::size_t n = loop.x.size();
  std::vector<double> s(n, 0.0);
  std::vector<double> y(n, 0.0);
  double f_prev = loop.f;  // x_{-1} = x_0
  double alpha_prev = 0.0;
  double beta_prev = 0.0;

  while (!loop.stop_checks()) {
    const hk::HkBuildContext ctx{loop.x,  loop.g, s,          y,
                                 loop.f,  f_prev, alpha_prev, beta_prev};
    const auto h0 = build_model(p, ctx, cfg.hk_strategy, loop.rec);
    const auto dir = direction::compute_direction(ctx, h0, cfg.gr_constants,
                                                  cfg.tau, cfg.mc_scale_first);

    IterTrace t;
    t.f = loop.f;
    t.gnorm_inf = loop.gnorm_inf;
    t.alpha = dir.alpha;
    t.beta = dir.beta;
    t.used_safeguard = dir.used_safeguard;

    f_prev = loop.f;
    const long k = loop.rec.iters;
    if (!loop.step(dir.d, t, &s, &y)) break;
    alpha_prev = (k == 0) ? loop.last_eta * dir.alpha : dir.alpha;
    beta_prev = dir.beta;
  }
  return loop.rec;
}

RunRecord steepest_descent_solve(const problems::ObjectiveFunction& p,
                                 std::span<const double> x0,
                                 const SolverConfig& cfg) {
  Loop loop(p, x0, cfg, "sd");
  std::vector<double> d(loop.x.size());
  while (!loop.stop_checks()) {
    scaled_sum(d, -1.0, loop.g, 0.0, loop.g);
    IterTrace t;
    t.f = loop.f;
    t.gnorm_inf = loop.gnorm_inf;
    t.alpha = 1.0;
    if (!loop.step(d, t)) break;
  }
  return loop.rec;
}

RunRecord cg_solve(const problems::ObjectiveFunction& p,
                   std::span<const double> x0, const SolverConfig& cfg) {
  Loop loop(p, x0, cfg, "cg");
  const std::size_t n = loop.x.size();
  std::vector<double> d(n);
  std::vector<double> g_prev(n);
  std::vector<double> d_prev(n, 0.0);
  double gp_norm2 = 0.0;
  bool have_prev = false;

  while (!loop.stop_checks()) {
    double beta = 0.0;
    if (have_prev) {
      // Nonnegative Polak-Ribiere coefficient.
      const double num = dot(loop.g, loop.g) - dot(loop.g, g_prev);
      beta = std::max(0.0, num / gp_norm2);
    }
    scaled_sum(d, -1.0, loop.g, beta, d_prev);
    if (!(dot(loop.g, d) < 0.0)) {
      scaled_sum(d, -1.0, loop.g, 0.0, loop.g);  // restart
      beta = 0.0;
    }
    g_prev = loop.g;
    gp_norm2 = dot(g_prev, g_prev);
    d_prev = d;
    have_prev = true;

    IterTrace t;
    t.f = loop.f;
    t.gnorm_inf = loop.gnorm_inf;
    t.beta = beta;
    if (!loop.step(d, t)) break;
  }
  return loop.rec;
}

RunRecord lbfgs_solve(const problems::ObjectiveFunction& p,
                      std::span<const double> x0, const SolverConfig& cfg,
                      int memory) {
  Loop loop(p, x0, cfg, "lbfgs");
  const std::size_t n = loop.x.size();
  constexpr double kCurvatureTol = 1e-10;

  struct Pair {
    std::vector<double> s, y;
    double rho;
    double sy;
    double yy;
  };
  std::deque<Pair> pairs;

  std::vector<double> d(n), q(n), s_new(n), y_new(n);
  std::vector<double> coeff_a;

  while (!loop.stop_checks()) {
    // Two-loop recursion for d = -H g.
    q.assign(loop.g.begin(), loop.g.end());
    coeff_a.assign(pairs.size(), 0.0);
    for (std::size_t i = pairs.size(); i-- > 0;) {
      const auto& pr = pairs[i];
      coeff_a[i] = pr.rho * dot(pr.s, q);
      scaled_sum(q, 1.0, q, -coeff_a[i], pr.y);
    }
    const double gamma =
        pairs.empty() ? 1.0 : pairs.back().sy / pairs.back().yy;
    scaled_sum(q, gamma, q, 0.0, q);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& pr = pairs[i];
      const double b = pr.rho * dot(pr.y, q);
      scaled_sum(q, 1.0, q, coeff_a[i] - b, pr.s);
    }
    scaled_sum(d, -1.0, q, 0.0, q);
    if (!(dot(loop.g, d) < 0.0)) {
      scaled_sum(d, -1.0, loop.g, 0.0, loop.g);
    }

    IterTrace t;
    t.f = loop.f;
    t.gnorm_inf = loop.gnorm_inf;
    if (!loop.step(d, t, &s_new, &y_new)) break;

    if (memory > 0) {
      const double sy = dot(s_new, y_new);
      const double sn = std::sqrt(dot(s_new, s_new));
      const double yn = std::sqrt(dot(y_new, y_new));
      if (sy > kCurvatureTol * sn * yn) {
        pairs.push_back({s_new, y_new, 1.0 / sy, sy, dot(y_new, y_new)});
        if (pairs.size() > static_cast<std::size_t>(memory)) {
          pairs.pop_front();
        }
      }
    }
  }
  return loop.rec;
}

const std::vector<std::string>& solver_labels() {
  static const std::vector<std::string> labels{"gmm", "sd", "cg", "lbfgs"};
  return labels;
}

RunRecord solve_by_label(const std::string& label,
                         const problems::ObjectiveFunction& p,
                         std::span<const double> x0, const SolverConfig& cfg) {
  if (label == "gmm") return gmm_solve(p, x0, cfg);
  if (label == "sd") return steepest_descent_solve(p, x0, cfg);
  if (label == "cg") return cg_solve(p, x0, cfg);
  if (label == "lbfgs") return lbfgs_solve(p, x0, cfg);
  throw std::invalid_argument("unknown solver label: " + label);
}

std::string_view status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "Converged";
    case RunStatus::MaxIters: return "MaxIters";
    case RunStatus::LineSearchFailure: return "LineSearchFailure";
    case RunStatus::TimeLimit: return "TimeLimit";
    case RunStatus::NumericalError: return "NumericalError";
  }
  return "NumericalError";
}

std::optional<RunStatus> status_from_name(std::string_view name) {
  for (auto s : {RunStatus::Converged, RunStatus::MaxIters,
                 RunStatus::LineSearchFailure, RunStatus::TimeLimit,
                 RunStatus::NumericalError}) {
    if (status_name(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view strategy_name(HkStrategy s) {
  switch (s) {
    case HkStrategy::interp: return "interp";
    case HkStrategy::fd_hvp: return "fd-hvp";
    case HkStrategy::diag_bb: return "diag-bb";
  }
  return "interp";
}

std::optional<HkStrategy> strategy_from_name(std::string_view name) {
  for (auto s :
       {HkStrategy::interp, HkStrategy::fd_hvp, HkStrategy::diag_bb}) {
    if (strategy_name(s) == name) return s;
  }
  return std::nullopt;
}

}  // namespace gmm::solver
