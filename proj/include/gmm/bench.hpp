#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gmm/solver.hpp"

namespace gmm::bench {

struct SolverSpec {
  std::string label;  // one of solver::solver_labels(), must be unique in plan
  solver::SolverConfig cfg;
  int lbfgs_memory = 10;
};

struct BenchPlan {
  std::vector<std::pair<std::string, int>> problems;  // (name, dimension)
  std::vector<SolverSpec> solvers;
  int repetitions = 1;
  int parallelism = 1;
};

/// Run every (problem, solver, repetition) combination. Plan-level errors
/// (unknown problem, bad dimension, empty lists, duplicate labels) throw
/// before any run starts; per-run failures land in RunRecord::status.
/// Output is sorted by (problem, n, solver, repetition) regardless of the
/// execution parallelism.
std::vector<solver::RunRecord> run_matrix(const BenchPlan& plan);

enum class Metric { time, iters, fevals, gevals };

std::string_view metric_name(Metric m);
std::optional<Metric> metric_from_name(std::string_view name);

struct ProfilePoint {
  double tau = 1.0;
  double rho = 0.0;
};

struct ProfileCurve {
  std::string solver;
  std::vector<ProfilePoint> points;  // nondecreasing in both coordinates
};

/// Dolan-More performance profile: ratios to the per-problem best, failed
/// runs at infinity, repetitions collapsed by median. Every curve carries a
/// breakpoint at every ratio realized by any solver. Throws on empty input.
std::vector<ProfileCurve> perf_profile(
    const std::vector<solver::RunRecord>& records, Metric metric);

void write_records_csv(const std::vector<solver::RunRecord>& records,
                       const std::string& path);
std::vector<solver::RunRecord> read_records_csv(const std::string& path);
void write_curves_csv(const std::vector<ProfileCurve>& curves,
                      const std::string& path);

/// Line-delimited JSON, one object per completed iteration.
void write_trace_jsonl(const solver::RunRecord& rec, const std::string& path);

}  // namespace gmm::bench
