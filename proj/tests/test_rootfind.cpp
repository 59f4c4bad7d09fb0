#include <doctest.h>

#include <cmath>
#include <random>

#include "genvi/rootfind.hpp"

using namespace genvi;

TEST_SUITE("rootfind") {

TEST_CASE("linear residual converges in one iteration") {
  const auto r = newton_solve([](const Vec& x) { return Vec{2.0 * x[0] - 3.0}; }, Vec{0.0});
  CHECK(r.x[0] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(r.stats.iterations == 1);
}

TEST_CASE("quadratic root") {
  const SolveSettings s{1e-12, 50, 1e-7};
  const auto r = newton_solve([](const Vec& x) { return Vec{x[0] * x[0] - 4.0}; }, Vec{1.0}, s);
  CHECK(std::abs(r.x[0] - 2.0) < 1e-12);
  CHECK(r.stats.residual_norm <= 1e-12);
}

TEST_CASE("no real root fails with a solver error") {
  try {
    newton_solve([](const Vec& x) { return Vec{x[0] * x[0] + 1.0}; }, Vec{0.0});
    FAIL("expected SolveError");
  } catch (const SolveError& e) {
    const bool kind_ok =
        e.kind() == SolveFailure::max_iter_exceeded || e.kind() == SolveFailure::singular_jacobian;
    CHECK(kind_ok);
    CHECK(e.last_iterate().size() == 1);
  }
}

TEST_CASE("non-finite residual") {
  CHECK_THROWS_AS(newton_solve([](const Vec&) { return Vec{NAN}; }, Vec{0.0}), SolveError);
}

TEST_CASE("settings validation") {
  CHECK_THROWS_AS((SolveSettings{0.0, 50, 1e-7}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((SolveSettings{1e-12, 0, 1e-7}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((SolveSettings{1e-12, 50, -1.0}.validate()), std::invalid_argument);
}

TEST_CASE("context labels the error") {
  const SolveError e(SolveFailure::singular_jacobian, Vec{1.0}, 2.0);
  const auto tagged = e.with_context("euler_a");
  CHECK(std::string(tagged.what()).find("euler_a") != std::string::npos);
  CHECK(tagged.kind() == SolveFailure::singular_jacobian);
}

TEST_CASE("random quadratic systems satisfy the residual bound") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    // x_i + 0.2 sum_j a_ij x_j^2 = b_i, well inside the contraction regime
    const std::size_t n = 1 + trial % 4;
    std::vector<Vec> a(n, Vec(n));
    Vec b(n);
    for (auto& row : a)
      for (auto& x : row) x = u(rng);
    for (auto& x : b) x = u(rng);
    auto residual = [&](const Vec& x) {
      Vec r(n);
      for (std::size_t i = 0; i < n; ++i) {
        r[i] = x[i] - b[i];
        for (std::size_t j = 0; j < n; ++j) r[i] += 0.2 * a[i][j] * x[j] * x[j];
      }
      return r;
    };
    const auto res = newton_solve(residual, Vec(n, 0.0));
    CHECK(vec::norm_inf(residual(res.x)) <= 1e-12);
  }
}

TEST_CASE("bitwise deterministic") {
  auto residual = [](const Vec& x) { return Vec{std::sin(x[0]) + x[1] - 1.0, x[0] * x[1] - 0.2}; };
  const auto a = newton_solve(residual, Vec{0.5, 0.5});
  const auto b = newton_solve(residual, Vec{0.5, 0.5});
  CHECK(a.x == b.x);
  CHECK(a.stats.iterations == b.stats.iterations);
}

}
