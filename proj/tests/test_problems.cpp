#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "gmm/problems.hpp"
#include "support/test_util.hpp"

using namespace gmm::problems;

namespace {

// Small dimension compatible with every problem's structure (even, multiple
// of 4, >= 5).
int test_dim(const std::string&) { return 12; }

}  // namespace

TEST_CASE("registry is populated and queryable") {
  const auto entries = registry();
  CHECK(entries.size() >= 10);
  for (const auto& e : entries) {
    CHECK(e.default_dim >= 2);
    auto p = make_problem(e.name, test_dim(e.name));
    CHECK(p->name() == e.name);
    CHECK(p->dim() == test_dim(e.name));
    CHECK(static_cast<int>(p->start().size()) == p->dim());
  }
}

TEST_CASE("unknown names and bad dimensions are rejected") {
  CHECK_THROWS_AS(make_problem("no-such-problem", 10), std::invalid_argument);
  CHECK_THROWS_AS(make_problem("ext-rosenbrock", 7), std::invalid_argument);
  CHECK_THROWS_AS(make_problem("woods", 10), std::invalid_argument);
  CHECK_THROWS_AS(make_problem("bdqrtic", 4), std::invalid_argument);
  CHECK_THROWS_AS(make_problem("tridia", 1), std::invalid_argument);
}

TEST_CASE("every registered problem passes the finite-difference check") {
  std::mt19937_64 rng(101);
  for (const auto& e : registry()) {
    CAPTURE(e.name);
    const auto p = make_problem(e.name, test_dim(e.name));
    const std::size_t n = static_cast<std::size_t>(p->dim());

    // At the standard start.
    {
      const auto x0 = p->start();
      const auto rep = fd_grad_check(*p, x0, fd_default_step(x0));
      CAPTURE(rep.worst_index);
      CHECK(rep.max_rel_err <= 1e-5);
    }
    // And at 10 uniform points in [-2, 2]^n.
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> x(n);
      for (auto& xi : x) xi = u(rng);
      const auto rep = fd_grad_check(*p, x, fd_default_step(x));
      CAPTURE(trial);
      CAPTURE(rep.worst_index);
      CHECK(rep.max_rel_err <= 1e-5);
    }
  }
}

TEST_CASE("known minimum values lower-bound the objective") {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (const auto& e : registry()) {
    const auto p = make_problem(e.name, test_dim(e.name));
    const auto fmin = p->known_fmin();
    if (!fmin) continue;
    CAPTURE(e.name);
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> x(static_cast<std::size_t>(p->dim()));
      for (auto& xi : x) xi = u(rng);
      CHECK(p->value(x) >= *fmin - 1e-12 * (1.0 + std::fabs(*fmin)));
    }
  }
}

TEST_CASE("evaluation is pure: repeated calls are bitwise identical") {
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const auto& e : registry()) {
    const auto p = make_problem(e.name, test_dim(e.name));
    std::vector<double> x(static_cast<std::size_t>(p->dim()));
    for (auto& xi : x) xi = u(rng);
    CHECK(p->value(x) == p->value(x));
    CHECK(p->gradient_of(x) == p->gradient_of(x));
  }
}

TEST_CASE("extended Rosenbrock analytic values") {
  SUBCASE("minimizer at all ones") {
    const auto p = make_problem("ext-rosenbrock", 2);
    const std::vector<double> ones{1.0, 1.0};
    CHECK(p->value(ones) == 0.0);
    const auto g = p->gradient_of(ones);
    CHECK(g[0] == 0.0);
    CHECK(g[1] == 0.0);
  }
  SUBCASE("value at the standard start via the per-pair oracle") {
    const auto p = make_problem("ext-rosenbrock", 4);
    const auto x0 = p->start();
    // Each (-1.2, 1) pair contributes 100 (1 - 1.44)^2 + (1 + 1.2)^2.
    const double per_pair = 100.0 * (1.0 - 1.44) * (1.0 - 1.44) + 2.2 * 2.2;
    CHECK(p->value(x0) == doctest::Approx(2.0 * per_pair).epsilon(1e-14));
    CHECK(p->value(x0) == doctest::Approx(48.4).epsilon(1e-14));
  }
}

TEST_CASE("unit-spectrum diagonal quadratic is half the squared norm") {
  const auto p = make_quadratic_diag(std::vector<double>(5, 1.0));
  std::mt19937_64 rng(109);
  const auto x = testutil::random_vector(rng, 5, -3.0, 3.0);
  CHECK(p->value(x) == doctest::Approx(0.5 * testutil::ref_dot(x, x)).epsilon(1e-15));
  const auto g = p->gradient_of(x);
  for (std::size_t i = 0; i < 5; ++i) CHECK(g[i] == x[i]);
}

TEST_CASE("finite differences sharp on quadratics, bounded on Rosenbrock") {
  SUBCASE("diagonal quadratic, explicit step") {
    const auto p = make_quadratic_diag({1.0, 2.0, 3.0, 4.0});
    std::mt19937_64 rng(113);
    const auto x = testutil::random_vector(rng, 4, -2.0, 2.0);
    const auto rep = fd_grad_check(*p, x, 1e-5);
    CHECK(rep.max_rel_err <= 1e-9);
    CHECK(rep.step == 1e-5);
  }
  SUBCASE("rosenbrock at the start") {
    const auto p = make_problem("ext-rosenbrock", 4);
    const auto rep = fd_grad_check(*p, p->start(), 1e-6);
    CHECK(rep.max_rel_err <= 1e-5);
  }
  SUBCASE("stationary point reports finite errors") {
    const auto p = make_quadratic_diag({1.0, 2.0});
    const std::vector<double> x{0.0, 0.0};
    const auto rep = fd_grad_check(*p, x, 1e-6);
    CHECK(std::isfinite(rep.max_rel_err));
    CHECK(rep.max_rel_err <= 1e-9);
  }
}

TEST_CASE("cosine lower bound is attained-level tight") {
  const auto p = make_problem("cosine", 12);
  REQUIRE(p->known_fmin().has_value());
  CHECK(*p->known_fmin() == -11.0);
  CHECK(p->value(p->start()) >= -11.0);
}
