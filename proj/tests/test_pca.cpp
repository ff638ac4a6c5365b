#include <doctest.h>

#include <cmath>

#include "bayesmi/pca.hpp"
#include "bayesmi/rng.hpp"
#include "oracles.hpp"

using namespace bayesmi;

TEST_CASE("axis-aligned 2-D data projects to a signed permutation of itself") {
  // Mean-centered, uncorrelated columns, variance larger along the second.
  Matrix x(4, 2);
  x(0, 0) = 0.5;  x(0, 1) = 3.0;
  x(1, 0) = 0.5;  x(1, 1) = -3.0;
  x(2, 0) = -0.5; x(2, 1) = 3.0;
  x(3, 0) = -0.5; x(3, 1) = -3.0;

  const Matrix proj = pca_projection(x);
  REQUIRE(proj.rows() == 4);
  REQUIRE(proj.cols() == 2);
  // First component is the high-variance input axis, sign fixed positive.
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(proj(i, 0) == doctest::Approx(x(i, 1)).epsilon(1e-10));
    CHECK(proj(i, 1) == doctest::Approx(x(i, 0)).epsilon(1e-10));
  }
}

TEST_CASE("rank-1 data zero-fills the second component") {
  Matrix x(6, 3);
  for (std::size_t i = 0; i < 6; ++i) {
    const double t = static_cast<double>(i) - 2.5;
    x(i, 0) = t;
    x(i, 1) = 2.0 * t;
    x(i, 2) = -t;
  }
  const Matrix proj = pca_projection(x);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(proj(i, 1) == 0.0);
  }
  // Projected variance along the line must match the input variance.
  double input_norm = 0.0, proj_norm = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 3; ++j) input_norm += x(i, j) * x(i, j);
    proj_norm += proj(i, 0) * proj(i, 0);
  }
  CHECK(proj_norm == doctest::Approx(input_norm).epsilon(1e-10));
}

TEST_CASE("projection matches a power-iteration eigen oracle") {
  Rng rng(8);
  Matrix x(50, 10);
  for (double& v : x.data()) v = rng.normal() + rng.uniform(-1.0, 1.0);

  const Matrix proj = pca_projection(x);

  // Oracle: covariance eigenvectors by power iteration with deflation.
  Matrix centered(50, 10);
  for (std::size_t j = 0; j < 10; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < 50; ++i) mean += x(i, j);
    mean /= 50.0;
    for (std::size_t i = 0; i < 50; ++i) centered(i, j) = x(i, j) - mean;
  }
  Matrix cov(10, 10);
  for (std::size_t a = 0; a < 10; ++a) {
    for (std::size_t b = 0; b < 10; ++b) {
      double sum = 0.0;
      for (std::size_t i = 0; i < 50; ++i) sum += centered(i, a) * centered(i, b);
      cov(a, b) = sum / 50.0;
    }
  }
  double lambda1 = 0.0, lambda2 = 0.0;
  const auto v1 = testing_oracles::power_iteration(cov, lambda1, rng);
  Matrix deflated = cov;
  testing_oracles::deflate(deflated, v1, lambda1);
  const auto v2 = testing_oracles::power_iteration(deflated, lambda2, rng);

  // Captured variance per component agrees with the oracle eigenvalues.
  double var1 = 0.0, var2 = 0.0;
  for (std::size_t i = 0; i < 50; ++i) {
    var1 += proj(i, 0) * proj(i, 0);
    var2 += proj(i, 1) * proj(i, 1);
  }
  CHECK(std::abs(var1 / 50.0 - lambda1) < 1e-8);
  CHECK(std::abs(var2 / 50.0 - lambda2) < 1e-8);

  // Component directions agree up to sign.
  for (int comp = 0; comp < 2; ++comp) {
    const auto& v = comp == 0 ? v1 : v2;
    double dot = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < 50; ++i) {
      double along = 0.0;
      for (std::size_t j = 0; j < 10; ++j) along += centered(i, j) * v[j];
      dot += along * proj(i, comp);
      norm += along * along;
    }
    CHECK(std::abs(std::abs(dot) / norm - 1.0) < 1e-7);
  }
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(pca_projection(Matrix(1, 5)), std::invalid_argument);
  CHECK_THROWS_AS(pca_projection(Matrix(5, 1)), std::invalid_argument);
}
