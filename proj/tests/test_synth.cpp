#include <cmath>

#include <gtest/gtest.h>

#include "bbhta/metrics.hpp"
#include "bbhta/synth.hpp"

using namespace bbhta;

TEST(Synth, AbsorbingChains) {
  const auto inactive = MarkovChainParams::from_p_p10(1.0, 0.0);
  EXPECT_EQ(support_size(sample_support(inactive, 300, {7, 0})), 0u);
  const auto active = MarkovChainParams::from_p_p01(0.0, 0.0);
  EXPECT_EQ(support_size(sample_support(active, 300, {7, 0})), 300u);
}

TEST(Synth, PooledTransitionFrequencies) {
  const auto mc = MarkovChainParams::from_p_p01(0.9, 0.09);
  std::size_t from_zero = 0, zero_to_one = 0, from_one = 0, one_to_zero = 0;
  for (std::uint64_t t = 0; t < 2000; ++t) {
    const Support s = sample_support(mc, 501, {42, t});
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      if (s[i]) {
        ++from_one;
        one_to_zero += !s[i + 1];
      } else {
        ++from_zero;
        zero_to_one += s[i + 1];
      }
    }
  }
  ASSERT_EQ(from_zero + from_one, 1000000u);
  EXPECT_NEAR(static_cast<double>(zero_to_one) / static_cast<double>(from_zero), 0.01, 1e-3);
  EXPECT_NEAR(static_cast<double>(one_to_zero) / static_cast<double>(from_one), 0.09, 5e-3);
}

TEST(Synth, AmplitudeVariance) {
  const Vector theta = sample_amplitudes(1.0, 100000, {3, 1});
  const double mean = theta.mean();
  const double var = (theta.array() - mean).square().sum() / static_cast<double>(theta.size() - 1);
  EXPECT_NEAR(var, 1.0, 0.02);
  EXPECT_NEAR(mean, 0.0, 0.02);
  EXPECT_LE(sample_amplitudes(1e-9, 1000, {3, 1}).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_THROW(sample_amplitudes(0.0, 10, {3, 1}), InvalidArgument);
}

TEST(Synth, MatrixColumnsAreUnitAndBounded) {
  const Matrix phi = sample_matrix(192, 512, {1, 0});
  ASSERT_EQ(phi.rows(), 192);
  ASSERT_EQ(phi.cols(), 512);
  for (Eigen::Index j = 0; j < phi.cols(); ++j) EXPECT_NEAR(phi.col(j).norm(), 1.0, 1e-10);
}

TEST(Synth, ExactSnr) {
  const Matrix phi = sample_matrix(32, 64, {9, 2});
  const Vector w = sample_amplitudes(1.0, 64, {9, 2});
  for (double target : {0.0, 20.0, 13.5}) {
    const auto meas = measure_with_snr(phi, w, target, {9, 2});
    EXPECT_NEAR(snr_db(phi * w, meas.noise), target, 1e-10);
    EXPECT_NEAR(meas.sigma_n, meas.noise.norm() / std::sqrt(32.0), 1e-15);
    EXPECT_LE((meas.y - phi * w - meas.noise).norm(), 1e-12);
  }
  const auto meas = measure_with_snr(phi, w, 20.0, {9, 2});
  EXPECT_NEAR((phi * w).norm() / meas.noise.norm(), 10.0, 1e-12);
  EXPECT_THROW(measure_with_snr(phi, Vector::Zero(64), 10.0, {9, 2}), InvalidArgument);
}

TEST(Synth, TrialIsDeterministic) {
  TrialSpec spec;
  spec.n = 48;
  spec.m = 128;
  const auto a = generate_trial(spec, {5, 17});
  const auto b = generate_trial(spec, {5, 17});
  EXPECT_EQ(a.phi, b.phi);
  EXPECT_EQ(a.signal.s(), b.signal.s());
  EXPECT_EQ(a.signal.theta(), b.signal.theta());
  EXPECT_EQ(a.measurement.y, b.measurement.y);
  const auto c = generate_trial(spec, {5, 18});
  EXPECT_NE(a.measurement.y, c.measurement.y);
}

TEST(Synth, StreamsAreDistinct) {
  const TrialSeed seed{1, 2};
  EXPECT_NE(seed.stream_seed(Stream::support), seed.stream_seed(Stream::noise));
  EXPECT_NE(seed.stream_seed(Stream::support, 0), seed.stream_seed(Stream::support, 1));
  EXPECT_NE((TrialSeed{1, 2}.stream_seed(Stream::matrix)), (TrialSeed{2, 1}.stream_seed(Stream::matrix)));
}

TEST(Synth, AllZeroSignalsAreRedrawn) {
  TrialSpec spec;
  spec.n = 8;
  spec.m = 4;
  spec.markov = MarkovChainParams::from_p_p01(0.95, 0.5);
  int redraws = 0;
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto trial = generate_trial(spec, {1, t});
    EXPECT_GT(support_size(trial.signal.s()), 0u);
    redraws += trial.resamples;
  }
  EXPECT_GT(redraws, 0);

  spec.markov = MarkovChainParams::from_p_p10(1.0, 0.0);
  EXPECT_THROW(generate_trial(spec, {1, 0}, 5), NumericalError);
}
