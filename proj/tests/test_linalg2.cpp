#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gmm/linalg2.hpp"
#include "support/test_util.hpp"

using namespace gmm::linalg2;
using testutil::close_rel;

namespace {
constexpr double kEps = 2.220446049250313e-16;
}

TEST_CASE("eig_bounds closed form on known matrices") {
  SUBCASE("identity") {
    const auto e = eig_bounds({1.0, 0.0, 1.0});
    CHECK(e.lambda_min == 1.0);
    CHECK(e.lambda_max == 1.0);
  }
  SUBCASE("pure off-diagonal") {
    const auto e = eig_bounds({0.0, 1.0, 0.0});
    CHECK(e.lambda_min == -1.0);
    CHECK(e.lambda_max == 1.0);
  }
  SUBCASE("characteristic-polynomial oracle") {
    const Sym2 h{2.0, 1.0, 2.0};
    const auto [lo, hi] = testutil::eig2_bisection_oracle(h);
    const auto e = eig_bounds(h);
    CHECK(e.lambda_min == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(e.lambda_max == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(e.lambda_min == doctest::Approx(lo).epsilon(1e-10));
    CHECK(e.lambda_max == doctest::Approx(hi).epsilon(1e-10));
  }
}

TEST_CASE("eig_bounds trace and determinant identities") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int it = 0; it < 2000; ++it) {
    const Sym2 h{u(rng), u(rng), u(rng)};
    const auto e = eig_bounds(h);
    CHECK(e.lambda_min <= e.lambda_max);
    CHECK(close_rel(e.lambda_min + e.lambda_max, h.h11 + h.h22, 1e-12));
    CHECK(close_rel(e.lambda_min * e.lambda_max,
                    h.h11 * h.h22 - h.h12 * h.h12, 1e-12));
  }
}

TEST_CASE("solve_spd known solutions") {
  SUBCASE("diagonal") {
    const auto u = solve_spd({2.0, 0.0, 2.0}, {4.0, -1.0});
    REQUIRE(u.has_value());
    CHECK((*u)[0] == 2.0);
    CHECK((*u)[1] == -0.5);
  }
  SUBCASE("identity passes rhs through") {
    const auto u = solve_spd({1.0, 0.0, 1.0}, {9.0, -2.5});
    REQUIRE(u.has_value());
    CHECK((*u)[0] == 9.0);
    CHECK((*u)[1] == -2.5);
  }
  SUBCASE("coupled system against back-substitution") {
    const Sym2 h{2.0, 1.0, 2.0};
    const auto u = solve_spd(h, {1.0, 1.0});
    REQUIRE(u.has_value());
    CHECK((*u)[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK((*u)[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(h.h11 * (*u)[0] + h.h12 * (*u)[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(h.h12 * (*u)[0] + h.h22 * (*u)[1] == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("indefinite input refused") {
    CHECK(!solve_spd({1.0, 0.0, -1.0}, {1.0, 1.0}).has_value());
    CHECK(!solve_spd({0.0, 0.0, 0.0}, {1.0, 1.0}).has_value());
  }
}

TEST_CASE("solve_spd residual property on random SPD systems") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int it = 0; it < 2000; ++it) {
    const Sym2 h = testutil::random_spd2(rng, 0.05, 50.0);
    const Vec2 rhs{u(rng), u(rng)};
    const auto sol = solve_spd(h, rhs);
    REQUIRE(sol.has_value());
    const double r0 = h.h11 * (*sol)[0] + h.h12 * (*sol)[1] - rhs[0];
    const double r1 = h.h12 * (*sol)[0] + h.h22 * (*sol)[1] - rhs[1];
    const double rnorm = std::hypot(r0, r1);
    const double rhsnorm = std::hypot(rhs[0], rhs[1]);
    const double unorm = std::hypot((*sol)[0], (*sol)[1]);
    CHECK(rnorm <= 1e-12 * std::max(1e-30, rhsnorm));
    CHECK(rnorm <= 10.0 * kEps * h.norm_inf() * unorm + 1e-300);
  }
}

TEST_CASE("solve_min_norm known cases") {
  SUBCASE("rank-1 consistent system") {
    // H = [1 -1; -1 1] has pseudoinverse H / 4.
    const auto u = solve_min_norm({1.0, -1.0, 1.0}, {1.0, -1.0});
    REQUIRE(u.has_value());
    CHECK((*u)[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK((*u)[1] == doctest::Approx(-0.5).epsilon(1e-14));
  }
  SUBCASE("zero system") {
    const auto u = solve_min_norm({0.0, 0.0, 0.0}, {0.0, 0.0});
    REQUIRE(u.has_value());
    CHECK((*u)[0] == 0.0);
    CHECK((*u)[1] == 0.0);
  }
  SUBCASE("inconsistent rhs rejected") {
    CHECK(!solve_min_norm({1.0, -1.0, 1.0}, {1.0, 0.0}).has_value());
  }
}

TEST_CASE("solve_min_norm equals spectral pseudoinverse on random rank-1") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int it = 0; it < 500; ++it) {
    // H = lambda v v' with unit v; rhs constructed in range(H).
    double v0 = u(rng), v1 = u(rng);
    const double vn = std::hypot(v0, v1);
    if (vn < 1e-3) continue;
    v0 /= vn;
    v1 /= vn;
    const double lambda = std::exp(u(rng));
    const Sym2 h{lambda * v0 * v0, lambda * v0 * v1, lambda * v1 * v1};
    const double coeff = u(rng);
    const Vec2 rhs{coeff * v0, coeff * v1};
    const auto sol = solve_min_norm(h, rhs);
    REQUIRE(sol.has_value());
    // Pseudoinverse oracle: u = (v'rhs / lambda) v.
    const double want = coeff / lambda;
    CHECK(close_rel((*sol)[0], want * v0, 1e-10));
    CHECK(close_rel((*sol)[1], want * v1, 1e-10));
    // Minimum norm: the solution is in range(H) = span{v}.
    const double off = -v1 * (*sol)[0] + v0 * (*sol)[1];
    CHECK(std::fabs(off) <= 1e-10 * (1.0 + std::fabs(want)));
  }
}

TEST_CASE("modified_cholesky shift semantics") {
  SUBCASE("already safely positive definite: unchanged") {
    const Sym2 h{3.0, 0.0, 2.0};
    const Sym2 out = modified_cholesky(h, 0.1);
    CHECK(out.h11 == h.h11);
    CHECK(out.h12 == h.h12);
    CHECK(out.h22 == h.h22);
  }
  SUBCASE("indefinite input shifted to the floor") {
    const Sym2 out = modified_cholesky({1.0, 0.0, -1.0}, 0.1);
    CHECK(out.h11 == doctest::Approx(2.1).epsilon(1e-15));
    CHECK(out.h22 == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(eig_bounds(out).lambda_min == doctest::Approx(0.1).epsilon(1e-12));
  }
  SUBCASE("zero matrix becomes tau I") {
    const Sym2 out = modified_cholesky({0.0, 0.0, 0.0}, 0.1);
    CHECK(out.h11 == 0.1);
    CHECK(out.h12 == 0.0);
    CHECK(out.h22 == 0.1);
  }
}

TEST_CASE("modified_cholesky floor property on random matrices") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int it = 0; it < 2000; ++it) {
    const Sym2 h{u(rng), u(rng), u(rng)};
    const double tau = std::exp(u(rng) * 0.5);
    const Sym2 out = modified_cholesky(h, tau);
    const auto e = eig_bounds(out);
    CHECK(e.lambda_min >= tau - 1e-12 * (tau + h.norm_inf()));
    if (eig_bounds(h).lambda_min >= tau) {
      CHECK(out.h11 == h.h11);
      CHECK(out.h22 == h.h22);
    }
  }
}

TEST_CASE("scale_congruence known cases and degeneracy") {
  SUBCASE("diagonal congruence") {
    const auto h = scale_congruence(Sym2::identity(), {2.0, 3.0});
    REQUIRE(h.has_value());
    CHECK(h->h11 == 4.0);
    CHECK(h->h12 == 0.0);
    CHECK(h->h22 == 9.0);
  }
  SUBCASE("unit scaling is the identity map") {
    const Sym2 in{2.0, 1.0, 2.0};
    const auto h = scale_congruence(in, {1.0, 1.0});
    REQUIRE(h.has_value());
    CHECK(h->h11 == in.h11);
    CHECK(h->h12 == in.h12);
    CHECK(h->h22 == in.h22);
  }
  SUBCASE("zero scale refused") {
    CHECK(!scale_congruence(Sym2::identity(), {0.0, 1.0}).has_value());
    CHECK(!scale_congruence(Sym2::identity(), {1.0, 0.0}).has_value());
  }
}

TEST_CASE("scale then inverse scale recovers the matrix") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> logs(-8.0, 8.0);
  for (int it = 0; it < 1000; ++it) {
    const Sym2 hhat{u(rng), u(rng), u(rng)};
    const ScalePair d{std::exp(logs(rng)), std::exp(logs(rng))};
    const auto h = scale_congruence(hhat, d);
    REQUIRE(h.has_value());
    CHECK(close_rel(h->h11 / (d.gnorm * d.gnorm), hhat.h11, 1e-14));
    CHECK(close_rel(h->h12 / (d.gnorm * d.snorm), hhat.h12, 1e-14));
    CHECK(close_rel(h->h22 / (d.snorm * d.snorm), hhat.h22, 1e-14));
  }
}

TEST_CASE("scaled eigenvalue bounds equal the unscaled ones") {
  // Exactly the scaled-matrix condition: the congruence built from
  // diag(gnorm, snorm) has D^-1 H D^-1 with hhat's spectrum.
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> logs(-4.0, 4.0);
  for (int it = 0; it < 100; ++it) {
    const Sym2 hhat = testutil::random_spd2(rng, 1e-3, 1e3);
    const ScalePair d{std::exp(logs(rng)), std::exp(logs(rng))};
    const auto h = scale_congruence(hhat, d);
    REQUIRE(h.has_value());
    const Sym2 unscaled{h->h11 / (d.gnorm * d.gnorm),
                        h->h12 / (d.gnorm * d.snorm),
                        h->h22 / (d.snorm * d.snorm)};
    const auto eh = eig_bounds(hhat);
    const auto eu = eig_bounds(unscaled);
    CHECK(close_rel(eh.lambda_min, eu.lambda_min, 1e-12));
    CHECK(close_rel(eh.lambda_max, eu.lambda_max, 1e-12));
  }
}
