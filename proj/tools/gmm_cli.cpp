#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gmm/bench.hpp"
#include "gmm/problems.hpp"
#include "gmm/solver.hpp"

namespace {

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_list_problems() {
  std::printf("name,default_n,known_fmin\n");
  for (const auto& e : gmm::problems::registry()) {
    if (e.known_fmin) {
      std::printf("%s,%d,%.17g\n", e.name.c_str(), e.default_dim, *e.known_fmin);
    } else {
      std::printf("%s,%d,\n", e.name.c_str(), e.default_dim);
    }
  }
  return 0;
}

struct RunOptions {
  std::string problems = "all";
  int n = 100;
  std::string solvers = "all";
  std::string hk = "interp";
  double tol = 1e-6;
  long max_iters = 1000000;
  bool monotone = false;
  bool nonmonotone = false;
  double gamma = 1e-5;
  double delta = 0.5;
  double eta_zh = 0.85;
  double c1 = 1e-6;
  double c2 = 1e6;
  double tau = 1e-8;
  bool mc_scale_first = false;
  int lbfgs_memory = 10;
  double time_limit = 0.0;
  int reps = 1;
  int jobs = 1;
  std::string out;
  std::string trace;
  std::string trace_dir;
};

int cmd_run(const RunOptions& opt) {
  gmm::solver::SolverConfig cfg;
  cfg.tol_grad_inf = opt.tol;
  cfg.max_iters = opt.max_iters;
  const auto strat = gmm::solver::strategy_from_name(opt.hk);
  if (!strat) {
    std::cerr << "error: unknown --hk strategy '" << opt.hk << "'\n";
    return 1;
  }
  cfg.hk_strategy = *strat;
  cfg.gr_constants = {opt.c1, opt.c2};
  cfg.ls.gamma = opt.gamma;
  cfg.ls.delta = opt.delta;
  cfg.ls.eta_zh = opt.eta_zh;
  cfg.ls.nonmonotone = !opt.monotone;
  cfg.tau = opt.tau;
  cfg.mc_scale_first = opt.mc_scale_first;
  if (opt.time_limit > 0.0) cfg.time_limit_s = opt.time_limit;
  cfg.collect_trace = !opt.trace.empty() || !opt.trace_dir.empty();

  gmm::bench::BenchPlan plan;
  plan.repetitions = opt.reps;
  plan.parallelism = opt.jobs;

  std::vector<std::string> names;
  if (opt.problems == "all") {
    for (const auto& e : gmm::problems::registry()) names.push_back(e.name);
  } else {
    names = split_commas(opt.problems);
  }
  for (const auto& name : names) plan.problems.emplace_back(name, opt.n);

  std::vector<std::string> labels = opt.solvers == "all"
                                        ? gmm::solver::solver_labels()
                                        : split_commas(opt.solvers);
  for (const auto& label : labels) {
    bool known = false;
    for (const auto& l : gmm::solver::solver_labels()) known |= (l == label);
    if (!known) {
      std::cerr << "error: unknown solver label '" << label << "'\n";
      return 1;
    }
    plan.solvers.push_back({label, cfg, opt.lbfgs_memory});
  }

  if (!opt.trace.empty() &&
      (plan.problems.size() != 1 || plan.solvers.size() != 1 ||
       plan.repetitions != 1)) {
    std::cerr << "error: --trace requires a single problem, solver and "
                 "repetition; use --trace-dir for matrices\n";
    return 1;
  }

  const auto records = gmm::bench::run_matrix(plan);
  gmm::bench::write_records_csv(records, opt.out);

  if (!opt.trace.empty()) {
    gmm::bench::write_trace_jsonl(records.front(), opt.trace);
  }
  if (!opt.trace_dir.empty()) {
    std::filesystem::create_directories(opt.trace_dir);
    std::size_t rep = 0;
    std::string prev_key;
    for (const auto& r : records) {
      const std::string key = r.problem + "_" + std::to_string(r.n) + "_" +
                              r.solver;
      rep = (key == prev_key) ? rep + 1 : 0;
      prev_key = key;
      const auto path = std::filesystem::path(opt.trace_dir) /
                        (key + "_r" + std::to_string(rep) + ".jsonl");
      gmm::bench::write_trace_jsonl(r, path.string());
    }
  }

  long converged = 0;
  for (const auto& r : records) {
    if (r.status == gmm::solver::RunStatus::Converged) ++converged;
  }
  std::fprintf(stderr, "%ld/%zu runs converged; records written to %s\n",
               converged, records.size(), opt.out.c_str());
  return 0;
}

int cmd_profile(const std::string& input, const std::string& metric,
                const std::string& out) {
  const auto m = gmm::bench::metric_from_name(metric);
  if (!m) {
    std::cerr << "error: unknown metric '" << metric << "'\n";
    return 1;
  }
  const auto records = gmm::bench::read_records_csv(input);
  const auto curves = gmm::bench::perf_profile(records, *m);
  gmm::bench::write_curves_csv(curves, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Momentum gradient method benchmark harness"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list-problems",
                                  "List registered problems as CSV");

  RunOptions run_opt;
  auto* run = app.add_subcommand("run", "Run a solver x problem matrix");
  run->add_option("--problems", run_opt.problems,
                  "Comma-separated problem names or 'all'");
  run->add_option("--n", run_opt.n, "Problem dimension");
  run->add_option("--solvers", run_opt.solvers,
                  "Comma-separated solver labels (gmm,sd,cg,lbfgs) or 'all'");
  run->add_option("--hk", run_opt.hk, "Model strategy: interp|fd-hvp|diag-bb");
  run->add_option("--tol", run_opt.tol, "Stop when ||grad||_inf <= tol");
  run->add_option("--max-iters", run_opt.max_iters, "Iteration cap");
  auto* mono = run->add_flag("--monotone", run_opt.monotone,
                             "Monotone acceptance rule");
  auto* nonmono = run->add_flag("--nonmonotone", run_opt.nonmonotone,
                                "Nonmonotone acceptance rule (default)");
  mono->excludes(nonmono);
  run->add_option("--gamma", run_opt.gamma, "Sufficient-decrease constant");
  run->add_option("--delta", run_opt.delta, "Backtracking factor");
  run->add_option("--eta-zh", run_opt.eta_zh, "Nonmonotone memory weight");
  run->add_option("--c1", run_opt.c1, "Direction test constant c1");
  run->add_option("--c2", run_opt.c2, "Direction test constant c2");
  run->add_option("--tau", run_opt.tau, "Safeguard eigenvalue floor");
  run->add_flag("--mc-scale-first", run_opt.mc_scale_first,
                "Apply the eigenvalue shift after the inverse scaling");
  run->add_option("--lbfgs-memory", run_opt.lbfgs_memory, "L-BFGS memory");
  run->add_option("--time-limit", run_opt.time_limit,
                  "Per-run wall-clock limit in seconds (0 = none)");
  run->add_option("--reps", run_opt.reps, "Repetitions per combination");
  run->add_option("--jobs", run_opt.jobs, "Parallel workers");
  run->add_option("--out", run_opt.out, "Records CSV output path")->required();
  run->add_option("--trace", run_opt.trace,
                  "Iteration trace (JSONL) for a single run");
  run->add_option("--trace-dir", run_opt.trace_dir,
                  "Directory for per-run iteration traces");

  std::string prof_input, prof_metric = "time", prof_out;
  auto* prof = app.add_subcommand("profile",
                                  "Performance profile from a records CSV");
  prof->add_option("--input", prof_input, "Records CSV")->required();
  prof->add_option("--metric", prof_metric, "time|iters|fevals|gevals");
  prof->add_option("--out", prof_out, "Profile CSV output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) return cmd_list_problems();
    if (run->parsed()) return cmd_run(run_opt);
    if (prof->parsed()) return cmd_profile(prof_input, prof_metric, prof_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
