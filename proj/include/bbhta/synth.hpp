#pragma once

// Synthetic data under the BGHMM prior: Markov supports, Gaussian amplitudes,
// uniform column-normalized matrices and noise scaled to an exact SNR.

#include <cstdint>
#include <random>

#include "bbhta/model.hpp"

namespace bbhta {

/// Independent random streams derived from one trial seed.
enum class Stream : std::uint64_t { support = 1, amplitudes = 2, matrix = 3, noise = 4 };

/// Seed of one Monte-Carlo trial. Every stream is a pure function of
/// (base_seed, trial_index, stream, attempt).
struct TrialSeed {
  std::uint64_t base_seed = 0;
  std::uint64_t trial_index = 0;

  std::uint64_t stream_seed(Stream stream, std::uint64_t attempt = 0) const;
  std::mt19937_64 engine(Stream stream, std::uint64_t attempt = 0) const;
};

/// s_1 from the steady state, then transitions row by row.
Support sample_support(const MarkovChainParams& markov, Eigen::Index m, const TrialSeed& seed,
                       std::uint64_t attempt = 0);

Vector sample_amplitudes(double sigma_theta, Eigen::Index m, const TrialSeed& seed, std::uint64_t attempt = 0);

/// Entries uniform on [-1, 1], columns scaled to unit norm.
Matrix sample_matrix(Eigen::Index n, Eigen::Index m, const TrialSeed& seed);

struct NoisyMeasurement {
  Vector y;
  Vector noise;
  /// Root-mean-square of the realized noise, ||n|| / sqrt(N).
  double sigma_n = 0.0;
};

/// y = phi * w + n with ||phi w|| / ||n|| = 10^(snr_db / 20) exactly for the
/// realized noise vector. Throws InvalidArgument when phi * w is zero.
NoisyMeasurement measure_with_snr(const Matrix& phi, const Vector& w_gen, double snr_db, const TrialSeed& seed);

struct SyntheticTrial {
  Matrix phi;
  SparseSignal signal;
  NoisyMeasurement measurement;
  /// Number of all-zero signals discarded before this one.
  int resamples = 0;
};

struct TrialSpec {
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  MarkovChainParams markov = MarkovChainParams::from_p_p01(0.9, 0.09);
  double sigma_theta = 1.0;
  double snr_db = 20.0;
};

/// Full instance for one trial. Degenerate all-zero signals are redrawn with
/// the next attempt index; gives up with NumericalError after max_attempts.
SyntheticTrial generate_trial(const TrialSpec& spec, const TrialSeed& seed, int max_attempts = 10000);

}  // namespace bbhta
