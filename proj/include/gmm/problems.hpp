#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gmm::problems {

/// Smooth unconstrained objective with analytic gradient. Instances are
/// immutable after construction and safe for concurrent evaluation.
class ObjectiveFunction {
 public:
  ObjectiveFunction(std::string name, int dim)
      : name_(std::move(name)), dim_(dim) {}
  virtual ~ObjectiveFunction() = default;

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }

  virtual double value(std::span<const double> x) const = 0;
  virtual void gradient(std::span<const double> x,
                        std::span<double> grad) const = 0;
  /// Standard initial point for this problem.
  virtual std::vector<double> start() const = 0;
  virtual std::optional<double> known_fmin() const { return std::nullopt; }

  std::vector<double> gradient_of(std::span<const double> x) const {
    std::vector<double> g(static_cast<std::size_t>(dim_));
    gradient(x, g);
    return g;
  }

 private:
  std::string name_;
  int dim_;
};

using ProblemPtr = std::shared_ptr<const ObjectiveFunction>;

struct RegistryEntry {
  std::string name;
  int default_dim;
  std::optional<double> known_fmin;  // at the default dimension
};

/// Registered problem names with their default dimensions, sorted by name.
std::vector<RegistryEntry> registry();

/// Instantiate a registered problem at dimension n. Throws
/// std::invalid_argument for an unknown name or a dimension incompatible
/// with the problem structure.
ProblemPtr make_problem(const std::string& name, int n);

/// Separable convex quadratic 0.5 * sum a_i x_i^2 with an explicit spectrum.
ProblemPtr make_quadratic_diag(std::vector<double> coeffs);

struct GradCheckReport {
  double max_rel_err = 0.0;
  int worst_index = -1;
  double step = 0.0;
};

/// Central-difference check of the analytic gradient; relative errors use
/// denominator max(1, |grad_i|).
GradCheckReport fd_grad_check(const ObjectiveFunction& p,
                              std::span<const double> x, double h);

/// Default step (machine_eps)^(1/3) * (1 + ||x||_inf).
double fd_default_step(std::span<const double> x);

}  // namespace gmm::problems
