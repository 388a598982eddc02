#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "bbhta/oracle.hpp"
#include "test_util.hpp"

using namespace bbhta;

TEST(OracleDensity, IntegratesToOneInOneDimension) {
  Matrix cov(1, 1);
  cov << 0.7;
  const double h = 1e-3;
  double mass = 0.0;
  for (double x = -10.0; x <= 10.0; x += h) mass += std::exp(oracle::gaussian_log_density(Vector::Constant(1, x), cov)) * h;
  EXPECT_NEAR(mass, 1.0, 1e-6);
}

TEST(OracleDensity, IntegratesToOneInTwoDimensions) {
  Matrix cov(2, 2);
  cov << 1.0, 0.4, 0.4, 0.5;
  const double h = 0.02;
  double mass = 0.0;
  Vector x(2);
  for (double a = -8.0; a <= 8.0; a += h) {
    for (double b = -8.0; b <= 8.0; b += h) {
      x << a, b;
      mass += std::exp(oracle::gaussian_log_density(x, cov)) * h * h;
    }
  }
  EXPECT_NEAR(mass, 1.0, 1e-5);
}

TEST(OracleDensity, StandardNormalAtOrigin) {
  EXPECT_NEAR(oracle::gaussian_log_density(Vector::Zero(3), Matrix::Identity(3, 3)),
              -1.5 * std::log(2.0 * std::numbers::pi), 1e-14);
  Matrix bad = Matrix::Identity(2, 2);
  bad(1, 1) = -1.0;
  EXPECT_THROW(oracle::gaussian_log_density(Vector::Zero(2), bad), NumericalError);
}

TEST(OracleScores, IgnoreAmplitudesOfTestedColumns) {
  std::mt19937_64 rng(6);
  const Matrix phi = fixtures::random_unit_columns(8, 16, rng);
  const Vector y = fixtures::random_vector(8, rng);
  Vector w = fixtures::random_vector(16, rng);
  const BghmmModel model(MarkovChainParams::from_p_p01(0.8, 0.2), 1.0, 0.3);
  const auto start = oracle::score_start_pair(y, phi, w, 4, 5, model);
  const auto end = oracle::score_end_pair(y, phi, w, 5, model);
  w[4] += 3.0;
  w[5] -= 2.0;
  EXPECT_EQ(oracle::score_start_pair(y, phi, w, 4, 5, model).difference(), start.difference());
  w[4] -= 3.0;
  EXPECT_NEAR(oracle::score_end_pair(y, phi, w, 5, model).difference(), end.difference(), 1e-9);
}

TEST(OracleScores, PriorOffsetsAreExact) {
  // With sigma_theta tiny both hypotheses share a likelihood; only the priors differ.
  std::mt19937_64 rng(10);
  const Matrix phi = fixtures::random_unit_columns(4, 3, rng);
  const Vector y = fixtures::random_vector(4, rng);
  const BghmmModel model(MarkovChainParams::from_p_p01(0.9, 0.09), 1e-9, 1.0);
  const auto start = oracle::score_start_pair(y, phi, Vector::Zero(3), -1, 0, model);
  EXPECT_NEAR(start.difference(), std::log(0.01 / 0.99), 1e-9);
  const auto end = oracle::score_end_pair(y, phi, Vector::Zero(3), 1, model);
  EXPECT_NEAR(end.difference(), std::log(0.09 / 0.91), 1e-9);
}

TEST(OracleScores, RejectsBadInput) {
  const Matrix phi = Matrix::Identity(3, 3);
  const BghmmModel model(MarkovChainParams::from_p_p01(0.9, 0.09), 1.0, 0.1);
  EXPECT_THROW(oracle::score_end_pair(Vector::Zero(3), phi, Vector::Zero(3), 3, model), InvalidArgument);
  EXPECT_THROW(oracle::score_end_pair(Vector::Zero(2), phi, Vector::Zero(3), 0, model), InvalidArgument);
  const BghmmModel noiseless(MarkovChainParams::from_p_p01(0.9, 0.09), 1.0, 0.0);
  EXPECT_THROW(oracle::score_start_pair(Vector::Zero(3), phi, Vector::Zero(3), -1, 0, noiseless), InvalidArgument);
}
