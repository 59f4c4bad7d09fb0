#include <doctest.h>

#include <cmath>
#include <random>

#include "genvi/linalg.hpp"

using namespace genvi;

TEST_SUITE("linalg") {

TEST_CASE("vector helpers") {
  const Vec a{1.0, -2.0, 3.0}, b{0.5, 0.5, -1.0};
  CHECK(vec::add(a, b) == Vec{1.5, -1.5, 2.0});
  CHECK(vec::sub(a, b) == Vec{0.5, -2.5, 4.0});
  CHECK(vec::axpy(2.0, b, a) == Vec{2.0, -1.0, 1.0});
  CHECK(vec::dot(a, b) == doctest::Approx(-3.5));
  CHECK(vec::norm_inf(a) == 3.0);
  CHECK(vec::max_abs_diff(a, b) == 4.0);
  CHECK(vec::concat(a, b).size() == 6);
  CHECK_THROWS_AS(vec::add(a, Vec{1.0}), DimensionMismatch);
  CHECK_FALSE(vec::all_finite(Vec{1.0, NAN}));
}

TEST_CASE("matrix products and norms") {
  const Matrix a{{1.0, 2.0}, {3.0, 4.0}};
  CHECK(a * Vec{1.0, 1.0} == Vec{3.0, 7.0});
  const Matrix at = a.transposed();
  CHECK(at(0, 1) == 3.0);
  const Matrix aa = a * Matrix::identity(2);
  CHECK((aa - a).max_abs() == 0.0);
  CHECK(a.norm_inf() == 7.0);
  CHECK_THROWS_AS(a * Vec{1.0}, DimensionMismatch);
}

TEST_CASE("cholesky and lu agree on random SPD systems") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 6;
    Matrix b(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) b(i, j) = u(rng);
    Matrix a = b * b.transposed();
    for (std::size_t i = 0; i < n; ++i) a(i, i) += 1.0;
    Vec rhs(n);
    for (auto& x : rhs) x = u(rng);
    const Vec x1 = Cholesky(a).solve(rhs);
    const Vec x2 = lu_solve(a, rhs);
    CHECK(vec::max_abs_diff(a * x1, rhs) < 1e-12);
    CHECK(vec::max_abs_diff(x1, x2) < 1e-10);
  }
}

TEST_CASE("singular inputs are reported") {
  CHECK_THROWS_AS(Cholesky(Matrix{{1.0, 0.0}, {0.0, -1.0}}), SingularMatrix);
  CHECK_THROWS_AS(lu_solve(Matrix{{1.0, 2.0}, {2.0, 4.0}}, Vec{1.0, 1.0}), SingularMatrix);
}

}
