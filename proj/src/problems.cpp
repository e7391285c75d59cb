#include "gmm/problems.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "gmm/kernels.hpp"

namespace gmm::problems {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

std::vector<double> fill(int n, double v) {
  return std::vector<double>(static_cast<std::size_t>(n), v);
}

std::vector<double> alternating(int n, double even, double odd) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = (i % 2 == 0) ? even : odd;
  return x;
}

// Extended Rosenbrock, pairwise separable variant; minimizer at all ones.
class ExtRosenbrock final : public ObjectiveFunction {
 public:
  explicit ExtRosenbrock(int n) : ObjectiveFunction("ext-rosenbrock", n) {}

  double value(std::span<const double> x) const override {
    double f = 0.0;
    for (std::size_t j = 0; j + 1 < x.size(); j += 2) {
      const double t = x[j + 1] - x[j] * x[j];
      const double u = 1.0 - x[j];
      f += 100.0 * t * t + u * u;
    }
    return f;
  }

  void gradient(std::span<const double> x, std::span<double> g) const override {
    for (std::size_t j = 0; j + 1 < x.size(); j += 2) {
      const double t = x[j + 1] - x[j] * x[j];
      g[j] = -400.0 * x[j] * t - 2.0 * (1.0 - x[j]);
      g[j + 1] = 200.0 * t;
    }
  }

  std::vector<double> start() const override {
    return alternating(dim(), -1.2, 1.0);
  }
  std::optional<double> known_fmin() const override { return 0.0; }
};

class QuadraticDiag final : public ObjectiveFunction {
 public:
  explicit QuadraticDiag(std::vector<double> a)
      : ObjectiveFunction("quadratic-diag", static_cast<int>(a.size())),
        a_(std::move(a)) {}

  double value(std::span<const double> x) const override {
    double f = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) f += a_[i] * x[i] * x[i];
    return 0.5 * f;
  }

  void gradient(std::span<const double> x, std::span<double> g) const override {
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = a_[i] * x[i];
  }

  // No collection start for this one; all ones with +0.1 on every other
  // component.
  std::vector<double> start() const override {
    return alternating(dim(), 1.1, 1.0);
  }
  std::optional<double> known_fmin() const override { return 0.0; }

 private:
  std::vector<double> a_;
};

// Quadratic with growing weights on consecutive differences (TRIDIA form
// with the usual alpha=2, beta=gamma=delta=1).
class Tridia final : public ObjectiveFunction {
 public:
  explicit Tridia(int n) : ObjectiveFunction("tridia", n) {}

  double value(std::span<const double> x) const override {
    double f = (x[0] - 1.0) * (x[0] - 1.0);
    for (std::size_t i = 1; i < x.size(); ++i) {
      const double t = 2.0 * x[i] - x[i - 1];
      f += static_cast<double>(i + 1) * t * t;
    }
    return f;
  }

  void gradient(std::span<const double> x, std::span<double> g) const override {
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = 2.0 * (x[0] - 1.0);
    for (std::size_t i = 1; i < x.size(); ++i) {
      const double w = static_cast<double>(i + 1);
      const double t = 2.0 * x[i] - x[i - 1];
      g[i] += 4.0 * w * t;
      g[i - 1] -= 2.0 * w * t;
    }
  }

  std::vector<double> start() const override { return fill(dim(), 1.0); }
  std::optional<double> known_fmin() const override { return 0.0; }
};

// Convex quadratic chain with boundary anchors (DIXON3DQ form).
class Dixon3dq final : public ObjectiveFunction {
 public:
  explicit Dixon3dq(int n) : ObjectiveFunction("dixon3dq", n) {}

  double value(std::span<const double> x) const override {
    const std::size_t n = x.size();
    double f = (x[0] - 1.0) * (x[0] - 1.0) + (x[n - 1] - 1.0) * (x[n - 1] - 1.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double t = x[i] - x[i + 1];
      f += t * t;
    }
    return f;
  }

  void gradient(std::span<const double> x, std::span<double> g) const override {
    const std::size_t n = x.size();
    std::fill(g.begin(), g.end(), 0.0);
    g[0] += 2.0 * (x[0] - 1.0);
    g[n - 1] += 2.0 * (x[n - 1] - 1.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double t = x[i] - x[i + 1];
      g[i] += 2.0 * t;
      g[i + 1] -= 2.0 * t;
    }
  }

  std::vector<double> start() const override { return fill(dim(), -1.0); }
  std::optional<double> known_fmin() const override { return 0.0; }
};

// Separable quartic sum (x_i - i)^4 (DQRTIC form).
class Quartic final : public ObjectiveFunction {
 public:
  explicit Quartic(int n) : ObjectiveFunction("quartic", n) {}

  double value(std::span<const double> x) const override {
    double f = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double t = x[i] - static_cast<double>(i + 1);
      f += t * t * t * t;
    }
    return f;
  }

  void gradient(std::span<const double> x, std::span<double> g) const override {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double t = x[i] - static_cast<double>(i + 1);
      g[i] = 4.0 * t * t * t;
    }
  }

  std::vector<double> start() const override { return fill(dim(), 2.0); }
  std::optional<double> known_fmin() const override { return 0.0; }
};

// Nonconvex cosine chain.
class Cosine final : public ObjectiveFunction {
 public:
  explicit Cosine(int n) : ObjectiveFunction("cosine", n) {}

  double value(std::span<const double> x) const override {
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      f += std::cos(x[i] * x[i] - 0.5 * x[i + 1]);
    }
    return f;
  }

  void gradient(std::span<const double> x, std::span<double> g) const override {
    std::fill(g.begin(), g.end(), 0.0);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      const double s = std::sin(x[i] * x[i] - 0.5 * x[i + 1]);
      g[i] -= 2.0 * x[i] * s;
      g[i + 1] += 0.5 * s;
    }
  }

  std::vector<double> start() const override { return fill(dim(), 1.0); }
  std::optional<double> known_fmin() const override {
    return -static_cast<double>(dim() - 1);
  }
};

class Arwhead final : public ObjectiveFunction {
 public:
  explicit Arwhead(int n) : ObjectiveFunction("arwhead", n) {}

  double value(std::span<const double> x) const override {
    const double last = x[x.size() - 1];
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      const double t = x[i] * x[i] + last * last;
      f += t * t - 4.0 * x[i] + 3.0;
    }
    return f;
  }

  void gradient(std::span<const double> x, std::span<double> g) const override {
    const std::size_t n = x.size();
    const double last = x[n - 1];
    std::fill(g.begin(), g.end(), 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double t = x[i] * x[i] + last * last;
      g[i] += 4.0 * t * x[i] - 4.0;
      g[n - 1] += 4.0 * t * last;
    }
  }

  std::vector<double> start() const override { return fill(dim(), 1.0); }
  std::optional<double> known_fmin() const override { return 0.0; }
};

class Engval1 final : public ObjectiveFunction {
 public:
  explicit Engval1(int n) : ObjectiveFunction("engval1", n) {}

  double value(std::span<const double> x) const override {
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      const double t = x[i] * x[i] + x[i + 1] * x[i + 1];
      f += t * t - 4.0 * x[i] + 3.0;
    }
    return f;
  }

  void gradient(std::span<const double> x, std::span<double> g) const override {
    std::fill(g.begin(), g.end(), 0.0);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      const double t = x[i] * x[i] + x[i + 1] * x[i + 1];
      g[i] += 4.0 * t * x[i] - 4.0;
      g[i + 1] += 4.0 * t * x[i + 1];
    }
  }

  std::vector<double> start() const override { return fill(dim(), 2.0); }
};

class Liarwhd final : public ObjectiveFunction {
 public:
  explicit Liarwhd(int n) : ObjectiveFunction("liarwhd", n) {}

  double value(std::span<const double> x) const override {
    double f = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double t = x[i] * x[i] - x[0];
      const double u = x[i] - 1.0;
      f += 4.0 * t * t + u * u;
    }
    return f;
  }

  void gradient(std::span<const double> x, std::span<double> g) const override {
    std::fill(g.begin(), g.end(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double t = x[i] * x[i] - x[0];
      g[i] += 16.0 * t * x[i] + 2.0 * (x[i] - 1.0);
      g[0] -= 8.0 * t;
    }
  }

  std::vector<double> start() const override { return fill(dim(), 4.0); }
  std::optional<double> known_fmin() const override { return 0.0; }
};

class Woods final : public ObjectiveFunction {
 public:
  explicit Woods(int n) : ObjectiveFunction("woods", n) {}

  double value(std::span<const double> x) const override {
    double f = 0.0;
    for (std::size_t j = 0; j + 3 < x.size(); j += 4) {
      const double a = x[j], b = x[j + 1], c = x[j + 2], d = x[j + 3];
      const double t1 = b - a * a;
      const double t2 = d - c * c;
      const double t3 = b + d - 2.0;
      const double t4 = b - d;
      f += 100.0 * t1 * t1 + (1.0 - a) * (1.0 - a) + 90.0 * t2 * t2 +
           (1.0 - c) * (1.0 - c) + 10.0 * t3 * t3 + 0.1 * t4 * t4;
    }
    return f;
  }

  void gradient(std::span<const double> x, std::span<double> g) const override {
    std::fill(g.begin(), g.end(), 0.0);
    for (std::size_t j = 0; j + 3 < x.size(); j += 4) {
      const double a = x[j], b = x[j + 1], c = x[j + 2], d = x[j + 3];
      const double t1 = b - a * a;
      const double t2 = d - c * c;
      const double t3 = b + d - 2.0;
      const double t4 = b - d;
      g[j] += -400.0 * a * t1 - 2.0 * (1.0 - a);
      g[j + 1] += 200.0 * t1 + 20.0 * t3 + 0.2 * t4;
      g[j + 2] += -360.0 * c * t2 - 2.0 * (1.0 - c);
      g[j + 3] += 180.0 * t2 + 20.0 * t3 - 0.2 * t4;
    }
  }

  std::vector<double> start() const override {
    return alternating(dim(), -3.0, -1.0);
  }
  std::optional<double> known_fmin() const override { return 0.0; }
};

class Nondquar final : public ObjectiveFunction {
 public:
  explicit Nondquar(int n) : ObjectiveFunction("nondquar", n) {}

  double value(std::span<const double> x) const override {
    const std::size_t n = x.size();
    const double t0 = x[0] - x[1];
    const double tn = x[n - 2] + x[n - 1];
    double f = t0 * t0 + tn * tn;
    for (std::size_t i = 0; i + 2 < n; ++i) {
      const double t = x[i] + x[i + 1] + x[n - 1];
      f += t * t * t * t;
    }
    return f;
  }

  void gradient(std::span<const double> x, std::span<double> g) const override {
    const std::size_t n = x.size();
    std::fill(g.begin(), g.end(), 0.0);
    const double t0 = x[0] - x[1];
    g[0] += 2.0 * t0;
    g[1] -= 2.0 * t0;
    const double tn = x[n - 2] + x[n - 1];
    g[n - 2] += 2.0 * tn;
    g[n - 1] += 2.0 * tn;
    for (std::size_t i = 0; i + 2 < n; ++i) {
      const double t = x[i] + x[i + 1] + x[n - 1];
      const double u = 4.0 * t * t * t;
      g[i] += u;
      g[i + 1] += u;
      g[n - 1] += u;
    }
  }

  std::vector<double> start() const override {
    return alternating(dim(), 1.0, -1.0);
  }
  std::optional<double> known_fmin() const override { return 0.0; }
};

class Penalty1 final : public ObjectiveFunction {
 public:
  explicit Penalty1(int n) : ObjectiveFunction("penalty1", n) {}

  double value(std::span<const double> x) const override {
    constexpr double a = 1e-5;
    double f = 0.0;
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double t = x[i] - 1.0;
      f += a * t * t;
      sq += x[i] * x[i];
    }
    const double u = sq - 0.25;
    return f + u * u;
  }

  void gradient(std::span<const double> x, std::span<double> g) const override {
    constexpr double a = 1e-5;
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sq += x[i] * x[i];
    const double u = sq - 0.25;
    for (std::size_t i = 0; i < x.size(); ++i) {
      g[i] = 2.0 * a * (x[i] - 1.0) + 4.0 * u * x[i];
    }
  }

  std::vector<double> start() const override {
    std::vector<double> x(static_cast<std::size_t>(dim()));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i + 1);
    return x;
  }
};

class Bdqrtic final : public ObjectiveFunction {
 public:
  explicit Bdqrtic(int n) : ObjectiveFunction("bdqrtic", n) {}

  double value(std::span<const double> x) const override {
    const std::size_t n = x.size();
    const double last = x[n - 1];
    double f = 0.0;
    for (std::size_t i = 0; i + 4 < n; ++i) {
      const double u = -4.0 * x[i] + 3.0;
      const double v = x[i] * x[i] + 2.0 * x[i + 1] * x[i + 1] +
                       3.0 * x[i + 2] * x[i + 2] + 4.0 * x[i + 3] * x[i + 3] +
                       5.0 * last * last;
      f += u * u + v * v;
    }
    return f;
  }

  void gradient(std::span<const double> x, std::span<double> g) const override {
    const std::size_t n = x.size();
    const double last = x[n - 1];
    std::fill(g.begin(), g.end(), 0.0);
    for (std::size_t i = 0; i + 4 < n; ++i) {
      const double u = -4.0 * x[i] + 3.0;
      const double v = x[i] * x[i] + 2.0 * x[i + 1] * x[i + 1] +
                       3.0 * x[i + 2] * x[i + 2] + 4.0 * x[i + 3] * x[i + 3] +
                       5.0 * last * last;
      g[i] += -8.0 * u + 4.0 * v * x[i];
      g[i + 1] += 8.0 * v * x[i + 1];
      g[i + 2] += 12.0 * v * x[i + 2];
      g[i + 3] += 16.0 * v * x[i + 3];
      g[n - 1] += 20.0 * v * last;
    }
  }

  std::vector<double> start() const override { return fill(dim(), 1.0); }
};

// Broyden tridiagonal system in least-squares form.
class Broydn3d final : public ObjectiveFunction {
 public:
  explicit Broydn3d(int n) : ObjectiveFunction("broydn3d", n) {}

  double value(std::span<const double> x) const override {
    const std::size_t n = x.size();
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = residual(x, i);
      f += r * r;
    }
    return f;
  }

  void gradient(std::span<const double> x, std::span<double> g) const override {
    const std::size_t n = x.size();
    std::fill(g.begin(), g.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = residual(x, i);
      g[i] += 2.0 * r * (3.0 - 4.0 * x[i]);
      if (i > 0) g[i - 1] -= 2.0 * r;
      if (i + 1 < n) g[i + 1] -= 4.0 * r;
    }
  }

  std::vector<double> start() const override { return fill(dim(), -1.0); }
  std::optional<double> known_fmin() const override { return 0.0; }

 private:
  static double residual(std::span<const double> x, std::size_t i) {
    const std::size_t n = x.size();
    double r = (3.0 - 2.0 * x[i]) * x[i] + 1.0;
    if (i > 0) r -= x[i - 1];
    if (i + 1 < n) r -= 2.0 * x[i + 1];
    return r;
  }
};

// Discretized two-point boundary value problem, least-squares form.
class Morebv final : public ObjectiveFunction {
 public:
  explicit Morebv(int n) : ObjectiveFunction("morebv", n) {}

  double value(std::span<const double> x) const override {
    const std::size_t n = x.size();
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = residual(x, i);
      f += r * r;
    }
    return f;
  }

  void gradient(std::span<const double> x, std::span<double> g) const override {
    const std::size_t n = x.size();
    const double h = 1.0 / static_cast<double>(n + 1);
    const double h2 = h * h;
    std::fill(g.begin(), g.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = residual(x, i);
      const double t = x[i] + static_cast<double>(i + 1) * h + 1.0;
      g[i] += 2.0 * r * (2.0 + 1.5 * h2 * t * t);
      if (i > 0) g[i - 1] -= 2.0 * r;
      if (i + 1 < n) g[i + 1] -= 2.0 * r;
    }
  }

  std::vector<double> start() const override {
    const double h = 1.0 / static_cast<double>(dim() + 1);
    std::vector<double> x(static_cast<std::size_t>(dim()));
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double t = static_cast<double>(i + 1) * h;
      x[i] = t * (t - 1.0);
    }
    return x;
  }
  std::optional<double> known_fmin() const override { return 0.0; }

 private:
  static double residual(std::span<const double> x, std::size_t i) {
    const std::size_t n = x.size();
    const double h = 1.0 / static_cast<double>(n + 1);
    const double t = x[i] + static_cast<double>(i + 1) * h + 1.0;
    double r = 2.0 * x[i] + 0.5 * h * h * t * t * t;
    if (i > 0) r -= x[i - 1];
    if (i + 1 < n) r -= x[i + 1];
    return r;
  }
};

std::vector<double> default_diag_spectrum(int n) {
  // Geometric spread from 1 to 100.
  std::vector<double> a(static_cast<std::size_t>(n));
  if (n == 1) {
    a[0] = 1.0;
    return a;
  }
  const double ratio = std::pow(100.0, 1.0 / static_cast<double>(n - 1));
  double v = 1.0;
  for (auto& ai : a) {
    ai = v;
    v *= ratio;
  }
  return a;
}

struct Maker {
  int default_dim;
  bool has_fmin_at_default;
  double fmin_at_default;
  ProblemPtr (*make)(int);
};

template <class T>
ProblemPtr make_simple(int n) {
  return std::make_shared<T>(n);
}

const std::map<std::string, Maker>& makers() {
  static const std::map<std::string, Maker> m = {
      {"arwhead", {100, true, 0.0, make_simple<Arwhead>}},
      {"bdqrtic", {100, false, 0.0, make_simple<Bdqrtic>}},
      {"broydn3d", {100, true, 0.0, make_simple<Broydn3d>}},
      {"cosine", {100, true, -99.0, make_simple<Cosine>}},
      {"dixon3dq", {100, true, 0.0, make_simple<Dixon3dq>}},
      {"engval1", {100, false, 0.0, make_simple<Engval1>}},
      {"ext-rosenbrock", {100, true, 0.0, make_simple<ExtRosenbrock>}},
      {"liarwhd", {100, true, 0.0, make_simple<Liarwhd>}},
      {"morebv", {100, true, 0.0, make_simple<Morebv>}},
      {"nondquar", {100, true, 0.0, make_simple<Nondquar>}},
      {"penalty1", {100, false, 0.0, make_simple<Penalty1>}},
      {"quadratic-diag",
       {100, true, 0.0,
        +[](int n) { return make_quadratic_diag(default_diag_spectrum(n)); }}},
      {"quartic", {100, true, 0.0, make_simple<Quartic>}},
      {"tridia", {100, true, 0.0, make_simple<Tridia>}},
      {"woods", {100, true, 0.0, make_simple<Woods>}},
  };
  return m;
}

void check_dimension(const std::string& name, int n) {
  require(n >= 2, name + ": dimension must be at least 2");
  if (name == "ext-rosenbrock") {
    require(n % 2 == 0, "ext-rosenbrock: dimension must be even");
  } else if (name == "woods") {
    require(n % 4 == 0, "woods: dimension must be a multiple of 4");
  } else if (name == "bdqrtic") {
    require(n >= 5, "bdqrtic: dimension must be at least 5");
  } else if (name == "nondquar" || name == "dixon3dq") {
    require(n >= 3, name + ": dimension must be at least 3");
  }
}

}  // namespace

std::vector<RegistryEntry> registry() {
  std::vector<RegistryEntry> out;
  for (const auto& [name, mk] : makers()) {
    RegistryEntry e;
    e.name = name;
    e.default_dim = mk.default_dim;
    if (mk.has_fmin_at_default) e.known_fmin = mk.fmin_at_default;
    out.push_back(std::move(e));
  }
  return out;
}

ProblemPtr make_problem(const std::string& name, int n) {
  const auto it = makers().find(name);
  if (it == makers().end()) {
    throw std::invalid_argument("unknown problem: " + name);
  }
  check_dimension(name, n);
  return it->second.make(n);
}

ProblemPtr make_quadratic_diag(std::vector<double> coeffs) {
  require(!coeffs.empty(), "quadratic-diag: empty spectrum");
  return std::make_shared<QuadraticDiag>(std::move(coeffs));
}

double fd_default_step(std::span<const double> x) {
  constexpr double eps = 2.220446049250313e-16;
  return std::cbrt(eps) * (1.0 + kernels::norm_inf(x));
}

GradCheckReport fd_grad_check(const ObjectiveFunction& p,
                              std::span<const double> x, double h) {
  const std::size_t n = x.size();
  std::vector<double> xp(x.begin(), x.end());
  std::vector<double> g(n);
  p.gradient(x, g);

  GradCheckReport rep;
  rep.step = h;
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = xp[i];
    xp[i] = xi + h;
    const double fp = p.value(xp);
    xp[i] = xi - h;
    const double fm = p.value(xp);
    xp[i] = xi;
    const double fd = (fp - fm) / (2.0 * h);
    const double err = std::fabs(fd - g[i]) / std::max(1.0, std::fabs(g[i]));
    if (err > rep.max_rel_err) {
      rep.max_rel_err = err;
      rep.worst_index = static_cast<int>(i);
    }
  }
  return rep;
}

}  // namespace gmm::problems
