#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "bbhta/detect.hpp"
#include "bbhta/oracle.hpp"
#include "test_util.hpp"

using namespace bbhta;

namespace {

BghmmModel fig_model(double sigma_n) {
  return BghmmModel(MarkovChainParams::from_p_p01(0.9, 0.09), 1.0, sigma_n);
}

// The oracle's log-posterior difference is affine in c^2 when the residual is
// c * phi_j; its root is the decision threshold.
double oracle_start_root(const BghmmModel& model) {
  const Matrix phi = Matrix::Identity(4, 2);
  const Vector w = Vector::Zero(2);
  auto diff = [&](double c2) {
    const Vector y = std::sqrt(c2) * phi.col(1);
    return oracle::score_start_pair(y, phi, w, 0, 1, model).difference();
  };
  const double d0 = diff(0.0), d1 = diff(1.0);
  return -d0 / (d1 - d0);
}

double oracle_end_root(const BghmmModel& model) {
  const Matrix phi = Matrix::Identity(4, 2);
  const Vector w = Vector::Zero(2);
  auto diff = [&](double c2) {
    const Vector y = std::sqrt(c2) * phi.col(1);
    return oracle::score_end_pair(y, phi, w, 1, model).difference();
  };
  const double d0 = diff(0.0), d1 = diff(1.0);
  return -d0 / (d1 - d0);
}

Support naive_sweep(const Vector& y, const Matrix& phi, const Vector& w, Support s, const BghmmModel& model) {
  const auto th = thresholds(model, RuleVariant::derived);
  for (Eigen::Index j = 0; j < phi.cols(); ++j) {
    std::vector<Eigen::Index> pair = {j};
    if (j > 0) pair.push_back(j - 1);
    const Vector x = residual_excluding(y, phi, w, pair);
    const Vector z = residual_excluding(y, phi, w, std::vector<Eigen::Index>{j});
    const auto jj = static_cast<std::size_t>(j);
    if (start_test(x, phi.col(j), th.th_start)) {
      s[jj] = 1;
    } else if (end_test(z, phi.col(j), th.th_end, RuleVariant::derived)) {
      s[jj] = 0;
    }
  }
  return s;
}

}  // namespace

TEST(Thresholds, StartExample) {
  const auto model = fig_model(0.1);
  ASSERT_NEAR(model.markov().p00(), 0.99, 1e-15);
  const double th = threshold_start(model, RuleVariant::derived);
  EXPECT_NEAR(th, 0.13943413819281542, 1e-14);
  EXPECT_NEAR(th, oracle_start_root(model), 1e-12);
}

TEST(Thresholds, EndExampleIsNegative) {
  const auto model = fig_model(0.1);
  const double th = threshold_end(model, RuleVariant::derived);
  EXPECT_NEAR(th, -1.2270834935202042e-4, 1e-15);
  EXPECT_NEAR(th, oracle_end_root(model), 1e-12);
  // No squared correlation is below a negative threshold.
  EXPECT_FALSE(end_test(Vector::Zero(4), Vector::Unit(4, 0), th, RuleVariant::derived));
}

TEST(Thresholds, RootsMatchOracleOverRandomModels) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 200; ++t) {
    const double p = fixtures::uniform(rng, 0.5, 0.99);
    const double p01 = fixtures::uniform(rng, 0.05, 0.9);
    const double sn = fixtures::log_uniform(rng, 0.01, 1.0);
    const BghmmModel model(MarkovChainParams::from_p_p01(p, p01), sn * fixtures::uniform(rng, 2.0, 100.0), sn);
    const double scale = sn * sn;
    EXPECT_NEAR(threshold_start(model, RuleVariant::derived), oracle_start_root(model), 1e-9 * scale);
    EXPECT_NEAR(threshold_end(model, RuleVariant::derived), oracle_end_root(model), 1e-9 * scale);
  }
}

TEST(Thresholds, Monotonicity) {
  for (double sn : {0.05, 0.3}) {
    double last = std::numeric_limits<double>::infinity();
    for (double p10 = 0.01; p10 < 0.1; p10 += 0.01) {
      const BghmmModel m(MarkovChainParams::from_p_p10(0.9, p10), 1.0, sn);
      const double th = threshold_start(m, RuleVariant::derived);
      EXPECT_LT(th, last);
      last = th;
    }
    last = -std::numeric_limits<double>::infinity();
    for (double p01 = 0.05; p01 < 0.9; p01 += 0.05) {
      const BghmmModel m(MarkovChainParams::from_p_p01(0.6, p01), 1.0, sn);
      const double th = threshold_end(m, RuleVariant::derived);
      EXPECT_GT(th, last);
      last = th;
    }
  }
}

TEST(Thresholds, ScaleLaw) {
  const auto mc = MarkovChainParams::from_p_p01(0.8, 0.3);
  const BghmmModel base(mc, 1.3, 0.2);
  for (double c : {0.01, 3.0, 250.0}) {
    const BghmmModel scaled(mc, 1.3 * c, 0.2 * c);
    for (auto v : {RuleVariant::derived, RuleVariant::printed}) {
      EXPECT_NEAR(threshold_start(scaled, v), c * c * threshold_start(base, v), 1e-12 * c * c);
      EXPECT_NEAR(threshold_end(scaled, v), c * c * threshold_end(base, v), 1e-12 * c * c);
    }
  }
  std::mt19937_64 rng(4);
  const Vector phi = fixtures::random_unit_columns(6, 1, rng).col(0);
  const auto th = thresholds(base, RuleVariant::derived);
  const auto th_scaled = thresholds(BghmmModel(mc, 13.0, 2.0), RuleVariant::derived);
  for (int t = 0; t < 100; ++t) {
    const Vector x = fixtures::random_vector(6, rng, 0.4);
    EXPECT_EQ(start_test(x, phi, th.th_start), start_test(10.0 * x, phi, th_scaled.th_start));
    EXPECT_EQ(end_test(x, phi, th.th_end, RuleVariant::derived),
              end_test(10.0 * x, phi, th_scaled.th_end, RuleVariant::derived));
  }
}

TEST(Thresholds, PrintedVariantDiffers) {
  const auto model = fig_model(0.1);
  const double derived = threshold_start(model, RuleVariant::derived);
  const double printed = threshold_start(model, RuleVariant::printed);
  EXPECT_NEAR(printed, 0.0202 * std::log(99.0 * std::sqrt(1.01)), 1e-14);
  EXPECT_GT(derived, printed);
  const Vector phi = Vector::Unit(3, 0);
  const Vector strong = 5.0 * phi;
  EXPECT_FALSE(end_test(strong, phi, 0.5, RuleVariant::derived));
  EXPECT_TRUE(end_test(strong, phi, 0.5, RuleVariant::printed));
}

TEST(Thresholds, DegenerateTransitions) {
  const BghmmModel never(MarkovChainParams::from_p_p10(1.0, 0.0), 1.0, 0.1);
  EXPECT_EQ(threshold_start(never, RuleVariant::derived), std::numeric_limits<double>::infinity());
  const BghmmModel sticky(MarkovChainParams::from_p_p01(0.0, 0.0), 1.0, 0.1);
  EXPECT_EQ(threshold_end(sticky, RuleVariant::derived), -std::numeric_limits<double>::infinity());
  EXPECT_THROW(threshold_start(BghmmModel(MarkovChainParams::memoryless(0.9), 1.0, 0.0), RuleVariant::derived),
               InvalidArgument);
}

TEST(Detect, DecisionsMatchOraclePosteriors) {
  std::mt19937_64 rng(99);
  int compared = 0;
  for (int t = 0; t < 300; ++t) {
    const double sn = fixtures::log_uniform(rng, 0.01, 1.0);
    const BghmmModel model(
        MarkovChainParams::from_p_p01(fixtures::uniform(rng, 0.5, 0.99), fixtures::uniform(rng, 0.05, 0.9)),
        sn * fixtures::uniform(rng, 2.0, 100.0), sn);
    const Matrix phi = fixtures::random_unit_columns(8, 16, rng);
    const Support s = fixtures::random_support(16, 0.3, rng);
    Vector w = fixtures::random_vector(16, rng, model.sigma_theta());
    for (Eigen::Index j = 0; j < 16; ++j) w[j] *= s[static_cast<std::size_t>(j)];
    const Vector y = phi * w + fixtures::random_vector(8, rng, sn);
    const Vector w_est = w + fixtures::random_vector(16, rng, 0.1 * model.sigma_theta());
    const auto th = thresholds(model, RuleVariant::derived);

    const auto j = std::uniform_int_distribution<Eigen::Index>(0, 15)(rng);
    std::vector<Eigen::Index> pair = {j};
    if (j > 0) pair.push_back(j - 1);
    const auto start = oracle::score_start_pair(y, phi, w_est, j - 1, j, model);
    if (std::abs(start.difference()) > 1e-9) {
      ++compared;
      EXPECT_EQ(start_test(residual_excluding(y, phi, w_est, pair), phi.col(j), th.th_start),
                start.difference() > 0);
    }
    const auto end = oracle::score_end_pair(y, phi, w_est, j, model);
    if (std::abs(end.difference()) > 1e-9) {
      ++compared;
      EXPECT_EQ(end_test(residual_excluding(y, phi, w_est, std::vector<Eigen::Index>{j}), phi.col(j), th.th_end,
                         RuleVariant::derived),
                end.difference() > 0);
    }
  }
  EXPECT_GT(compared, 550);
}

TEST(Detect, ResidualExcluding) {
  std::mt19937_64 rng(8);
  const Matrix phi = fixtures::random_unit_columns(5, 7, rng);
  const Vector w = fixtures::random_vector(7, rng);
  const Vector y = fixtures::random_vector(5, rng);
  Vector w_masked = w;
  w_masked[2] = 0;
  w_masked[5] = 0;
  const std::vector<Eigen::Index> ex = {2, 5};
  EXPECT_LE((residual_excluding(y, phi, w, ex) - (y - phi * w_masked)).norm(), 1e-12);
  EXPECT_THROW(residual_excluding(y, phi, w, std::vector<Eigen::Index>{7}), InvalidArgument);
}

TEST(Detect, SweepMatchesNaivePath) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 50; ++t) {
    const Matrix phi = fixtures::random_unit_columns(12, 30, rng);
    const Vector w = fixtures::random_vector(30, rng);
    const Vector y = fixtures::random_vector(12, rng, 2.0);
    const Support s0 = fixtures::random_support(30, 0.5, rng);
    const BghmmModel model(MarkovChainParams::from_p_p01(fixtures::uniform(rng, 0.5, 0.95), fixtures::uniform(rng, 0.05, 0.9)),
                           1.0, fixtures::uniform(rng, 0.05, 1.0));
    const Support got = sweep_support(y, phi, w, s0, model, RuleVariant::derived);
    EXPECT_EQ(got, naive_sweep(y, phi, w, s0, model));
    EXPECT_EQ(got, sweep_support(y, phi, w, s0, model, RuleVariant::derived));
  }
}

TEST(Detect, ZeroIterateActivatesOnlyStrongCorrelations) {
  std::mt19937_64 rng(2);
  const Matrix phi = fixtures::random_unit_columns(10, 20, rng);
  const Vector y = fixtures::random_vector(10, rng);
  const auto model = fig_model(0.3);
  const double th = threshold_start(model, RuleVariant::derived);
  ASSERT_GT(th, 0.0);
  const Support s = sweep_support(y, phi, Vector::Zero(20), Support(20, 0), model, RuleVariant::derived);
  for (Eigen::Index j = 0; j < 20; ++j) {
    const double c = phi.col(j).dot(y);
    EXPECT_EQ(s[static_cast<std::size_t>(j)], c * c > th ? 1 : 0);
  }
}

TEST(Detect, SingleSpikeIsFound) {
  std::mt19937_64 rng(31);
  const Matrix phi = fixtures::random_unit_columns(32, 64, rng);
  const Vector y = 5.0 * phi.col(40);
  const auto model = fig_model(0.05);
  const Support s = sweep_support(y, phi, Vector::Zero(64), Support(64, 0), model, RuleVariant::derived);
  EXPECT_EQ(s[40], 1);
  const auto oracle_scores = oracle::score_start_pair(y, phi, Vector::Zero(64), 39, 40, model);
  EXPECT_GT(oracle_scores.difference(), 0.0);
}

TEST(Detect, SingleSampleSignal) {
  Matrix phi(2, 1);
  phi << 1.0, 0.0;
  Vector y(2);
  y << 3.0, 0.1;
  const auto model = fig_model(0.1);
  EXPECT_EQ(sweep_support(y, phi, Vector::Zero(1), Support{0}, model, RuleVariant::derived), Support{1});
  EXPECT_EQ(sweep_support(0.01 * y, phi, Vector::Zero(1), Support{0}, model, RuleVariant::derived), Support{0});
}
