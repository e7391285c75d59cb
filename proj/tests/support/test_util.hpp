#pragma once

// Shared test fixtures: dense/diagonal quadratic objectives with analytic
// Hessians, controlled-spectrum random matrices, and small independent
// oracles. Everything here is test-only and deliberately avoids the library
// kernels so cross-checks stay independent.

#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "gmm/linalg2.hpp"
#include "gmm/problems.hpp"

namespace testutil {

using gmm::linalg2::Sym2;

inline double ref_dot(std::span<const double> a, std::span<const double> b) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += static_cast<long double>(a[i]) * static_cast<long double>(b[i]);
  }
  return static_cast<double>(acc);
}

inline double ref_norm2(std::span<const double> a) {
  return std::sqrt(ref_dot(a, a));
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n,
                                         double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

/// Dense symmetric matrix with the given eigenvalues, obscured by random
/// Givens rotations (which preserve the spectrum exactly).
inline std::vector<double> rotated_spd(std::mt19937_64& rng,
                                       std::vector<double> eigs,
                                       int sweeps = 4) {
  const std::size_t n = eigs.size();
  std::vector<double> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) a[i * n + i] = eigs[i];
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (std::size_t t = 0; t < n; ++t) {
      std::size_t i = pick(rng), j = pick(rng);
      if (i == j) continue;
      const double th = angle(rng);
      const double c = std::cos(th), s = std::sin(th);
      // A <- G' A G with G the rotation in the (i, j) plane.
      for (std::size_t k = 0; k < n; ++k) {
        const double ai = a[i * n + k], aj = a[j * n + k];
        a[i * n + k] = c * ai + s * aj;
        a[j * n + k] = -s * ai + c * aj;
      }
      for (std::size_t k = 0; k < n; ++k) {
        const double ai = a[k * n + i], aj = a[k * n + j];
        a[k * n + i] = c * ai + s * aj;
        a[k * n + j] = -s * ai + c * aj;
      }
    }
  }
  return a;
}

inline std::vector<double> matvec(std::span<const double> a,
                                  std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    long double acc = 0.0L;
    for (std::size_t j = 0; j < n; ++j) acc += (long double)a[i * n + j] * x[j];
    y[i] = static_cast<double>(acc);
  }
  return y;
}

/// f(x) = 0.5 x'Ax for a dense symmetric A (row-major).
class DenseQuadratic final : public gmm::problems::ObjectiveFunction {
 public:
  DenseQuadratic(std::vector<double> a, int n)
      : ObjectiveFunction("dense-quadratic", n), a_(std::move(a)) {}

  double value(std::span<const double> x) const override {
    const auto ax = matvec(a_, x);
    return 0.5 * ref_dot(x, ax);
  }

  void gradient(std::span<const double> x, std::span<double> g) const override {
    const auto ax = matvec(a_, x);
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = ax[i];
  }

  std::vector<double> start() const override {
    return std::vector<double>(static_cast<std::size_t>(dim()), 1.0);
  }
  std::optional<double> known_fmin() const override { return 0.0; }

  const std::vector<double>& matrix() const { return a_; }

 private:
  std::vector<double> a_;
};

/// Counts evaluations and remembers every point passed to value().
class CountingProblem final : public gmm::problems::ObjectiveFunction {
 public:
  explicit CountingProblem(gmm::problems::ProblemPtr inner)
      : ObjectiveFunction(inner->name(), inner->dim()), inner_(std::move(inner)) {}

  double value(std::span<const double> x) const override {
    ++value_calls;
    value_points.emplace_back(x.begin(), x.end());
    return inner_->value(x);
  }

  void gradient(std::span<const double> x, std::span<double> g) const override {
    ++grad_calls;
    inner_->gradient(x, g);
  }

  std::vector<double> start() const override { return inner_->start(); }

  mutable long value_calls = 0;
  mutable long grad_calls = 0;
  mutable std::vector<std::vector<double>> value_points;

 private:
  gmm::problems::ProblemPtr inner_;
};

/// log-uniformly distributed eigenvalues in [lo, hi].
inline std::vector<double> log_uniform_eigs(std::mt19937_64& rng,
                                            std::size_t n, double lo,
                                            double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  std::vector<double> e(n);
  for (auto& v : e) v = std::exp(u(rng));
  return e;
}

/// Random symmetric positive definite 2x2 with eigenvalues in [lo, hi].
inline Sym2 random_spd2(std::mt19937_64& rng, double lo, double hi) {
  const auto eigs = log_uniform_eigs(rng, 2, lo, hi);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  const double th = angle(rng);
  const double c = std::cos(th), s = std::sin(th);
  const double l1 = eigs[0], l2 = eigs[1];
  return Sym2{c * c * l1 + s * s * l2, c * s * (l1 - l2),
              s * s * l1 + c * c * l2};
}

/// Characteristic-polynomial oracle: eigenvalues of a symmetric 2x2 via
/// bisection on det(H - lambda I), independent of the closed form.
inline std::pair<double, double> eig2_bisection_oracle(const Sym2& h) {
  auto charpoly = [&](double lam) {
    return (h.h11 - lam) * (h.h22 - lam) - h.h12 * h.h12;
  };
  const double bound = std::fabs(h.h11) + std::fabs(h.h22) + 2.0 * std::fabs(h.h12) + 1.0;
  auto bisect = [&](double lo, double hi) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((charpoly(lo) <= 0.0) == (charpoly(mid) <= 0.0)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  // The characteristic polynomial is an upward parabola with vertex at the
  // trace midpoint; the roots straddle it.
  const double mid = 0.5 * (h.h11 + h.h22);
  return {bisect(-bound, mid), bisect(mid, bound)};
}

inline bool close_rel(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace testutil
