#include "gmm/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "gmm/problems.hpp"

namespace gmm::bench {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(std::string_view sv, const std::string& context) {
  // std::from_chars does not accept leading '+' or "inf"/"nan" uniformly
  // across implementations; strtod does.
  std::string tmp(sv);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (end == tmp.c_str()) {
    throw std::runtime_error(context + ": bad number '" + tmp + "'");
  }
  return v;
}

long parse_long(std::string_view sv, const std::string& context) {
  long v = 0;
  const auto res = std::from_chars(sv.data(), sv.data() + sv.size(), v);
  if (res.ec != std::errc{}) {
    throw std::runtime_error(context + ": bad integer '" + std::string(sv) +
                             "'");
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double metric_value(const solver::RunRecord& r, Metric m) {
  if (r.status != solver::RunStatus::Converged) return kInf;
  switch (m) {
    case Metric::time: return r.wall_time_s;
    case Metric::iters: return static_cast<double>(r.iters);
    case Metric::fevals: return static_cast<double>(r.f_evals);
    case Metric::gevals: return static_cast<double>(r.g_evals);
  }
  return kInf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::time: return "time";
    case Metric::iters: return "iters";
    case Metric::fevals: return "fevals";
    case Metric::gevals: return "gevals";
  }
  return "time";
}

std::optional<Metric> metric_from_name(std::string_view name) {
  for (auto m : {Metric::time, Metric::iters, Metric::fevals, Metric::gevals}) {
    if (metric_name(m) == name) return m;
  }
  return std::nullopt;
}

std::vector<solver::RunRecord> run_matrix(const BenchPlan& plan) {
  if (plan.problems.empty()) throw std::invalid_argument("run_matrix: no problems");
  if (plan.solvers.empty()) throw std::invalid_argument("run_matrix: no solvers");
  if (plan.repetitions < 1) throw std::invalid_argument("run_matrix: repetitions < 1");
  {
    std::set<std::string> labels;
    for (const auto& s : plan.solvers) {
      if (!labels.insert(s.label).second) {
        throw std::invalid_argument("run_matrix: duplicate solver label " +
                                    s.label);
      }
    }
  }

  // Instantiate all problems up front so plan-level errors abort before any
  // run starts.
  std::vector<problems::ProblemPtr> probs;
  probs.reserve(plan.problems.size());
  for (const auto& [name, n] : plan.problems) {
    probs.push_back(problems::make_problem(name, n));
  }

  struct Task {
    std::size_t prob_idx;
    std::size_t solver_idx;
    int rep;
  };
  std::vector<Task> tasks;
  for (std::size_t pi = 0; pi < probs.size(); ++pi) {
    for (std::size_t si = 0; si < plan.solvers.size(); ++si) {
      for (int r = 0; r < plan.repetitions; ++r) tasks.push_back({pi, si, r});
    }
  }

  std::vector<solver::RunRecord> records(tasks.size());
  std::vector<int> reps(tasks.size());

  auto run_task = [&](std::size_t t) {
    const auto& task = tasks[t];
    const auto& p = *probs[task.prob_idx];
    const auto& spec = plan.solvers[task.solver_idx];
    const auto x0 = p.start();
    if (spec.label == "lbfgs") {
      records[t] = solver::lbfgs_solve(p, x0, spec.cfg, spec.lbfgs_memory);
    } else {
      records[t] = solver::solve_by_label(spec.label, p, x0, spec.cfg);
    }
    reps[t] = task.rep;
  };

  const int jobs = std::max(1, plan.parallelism);
  if (jobs == 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const int count = std::min<std::size_t>(jobs, tasks.size());
    workers.reserve(static_cast<std::size_t>(count));
    for (int w = 0; w < count; ++w) {
      workers.emplace_back([&] {
        for (;;) {
          const std::size_t t = next.fetch_add(1);
          if (t >= tasks.size()) return;
          run_task(t);
        }
      });
    }
    for (auto& w : workers) w.join();
  }

  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto key = [&](std::size_t i) {
      return std::make_tuple(records[i].problem, records[i].n,
                             records[i].solver, reps[i]);
    };
    return key(a) < key(b);
  });
  std::vector<solver::RunRecord> sorted;
  sorted.reserve(records.size());
  for (std::size_t i : order) sorted.push_back(std::move(records[i]));
  return sorted;
}

std::vector<ProfileCurve> perf_profile(
    const std::vector<solver::RunRecord>& records, Metric metric) {
  if (records.empty()) throw std::invalid_argument("perf_profile: empty input");

  using Key = std::pair<std::string, int>;  // problem name, dimension
  std::set<Key> problem_set;
  std::set<std::string> solver_set;
  std::map<std::pair<Key, std::string>, std::vector<double>> samples;
  for (const auto& r : records) {
    const Key key{r.problem, r.n};
    problem_set.insert(key);
    solver_set.insert(r.solver);
    samples[{key, r.solver}].push_back(metric_value(r, metric));
  }

  // Repetitions collapse to their median; a missing (problem, solver) cell
  // counts as a failure.
  std::map<std::pair<Key, std::string>, double> value;
  for (const auto& p : problem_set) {
    for (const auto& s : solver_set) {
      const auto it = samples.find({p, s});
      value[{p, s}] = (it == samples.end()) ? kInf : median(it->second);
    }
  }

  std::map<std::pair<Key, std::string>, double> ratio;
  for (const auto& p : problem_set) {
    double best = kInf;
    for (const auto& s : solver_set) best = std::min(best, value[{p, s}]);
    for (const auto& s : solver_set) {
      const double v = value[{p, s}];
      double r = kInf;
      if (std::isfinite(v)) {
        if (best == 0.0) {
          r = (v == 0.0) ? 1.0 : kInf;
        } else {
          r = v / best;
        }
      }
      ratio[{p, s}] = r;
    }
  }

  std::set<double> breakpoints;
  for (const auto& [k, r] : ratio) {
    if (std::isfinite(r)) breakpoints.insert(r);
  }

  const double np = static_cast<double>(problem_set.size());
  std::vector<ProfileCurve> curves;
  for (const auto& s : solver_set) {
    ProfileCurve c;
    c.solver = s;
    for (double tau : breakpoints) {
      std::size_t solved = 0;
      for (const auto& p : problem_set) {
        if (ratio[{p, s}] <= tau) ++solved;
      }
      c.points.push_back({tau, static_cast<double>(solved) / np});
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

void write_records_csv(const std::vector<solver::RunRecord>& records,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "problem,n,solver,status,iters,f_evals,g_evals,final_f,"
         "final_gnorm_inf,wall_time_s\n";
  for (const auto& r : records) {
    out << r.problem << ',' << r.n << ',' << r.solver << ','
        << solver::status_name(r.status) << ',' << r.iters << ',' << r.f_evals
        << ',' << r.g_evals << ',' << fmt_double(r.final_f) << ','
        << fmt_double(r.final_gnorm_inf) << ',' << fmt_double(r.wall_time_s)
        << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<solver::RunRecord> read_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("empty records file: " + path);
  }
  std::vector<solver::RunRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    const std::string ctx = path + ":" + std::to_string(lineno);
    if (f.size() != 10) {
      throw std::runtime_error(ctx + ": expected 10 fields, got " +
                               std::to_string(f.size()));
    }
    solver::RunRecord r;
    r.problem = f[0];
    r.n = static_cast<int>(parse_long(f[1], ctx));
    r.solver = f[2];
    const auto st = solver::status_from_name(f[3]);
    if (!st) throw std::runtime_error(ctx + ": bad status '" + f[3] + "'");
    r.status = *st;
    r.iters = parse_long(f[4], ctx);
    r.f_evals = parse_long(f[5], ctx);
    r.g_evals = parse_long(f[6], ctx);
    r.final_f = parse_double(f[7], ctx);
    r.final_gnorm_inf = parse_double(f[8], ctx);
    r.wall_time_s = parse_double(f[9], ctx);
    out.push_back(std::move(r));
  }
  return out;
}

void write_curves_csv(const std::vector<ProfileCurve>& curves,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "solver,tau,rho\n";
  for (const auto& c : curves) {
    for (const auto& pt : c.points) {
      out << c.solver << ',' << fmt_double(pt.tau) << ',' << fmt_double(pt.rho)
          << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_trace_jsonl(const solver::RunRecord& rec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& t : rec.trace) {
    nlohmann::json obj{
        {"k", t.k},           {"f", t.f},
        {"gnorm_inf", t.gnorm_inf}, {"alpha", t.alpha},
        {"beta", t.beta},     {"eta", t.eta},
        {"backtracks", t.backtracks}, {"used_safeguard", t.used_safeguard},
    };
    out << obj.dump() << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace gmm::bench
