#include "bbhta/synth.hpp"

#include <cmath>

namespace bbhta {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t TrialSeed::stream_seed(Stream stream, std::uint64_t attempt) const {
  std::uint64_t h = splitmix64(base_seed);
  h = splitmix64(h ^ trial_index);
  h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
  return splitmix64(h ^ attempt);
}

std::mt19937_64 TrialSeed::engine(Stream stream, std::uint64_t attempt) const {
  return std::mt19937_64(stream_seed(stream, attempt));
}

Support sample_support(const MarkovChainParams& markov, Eigen::Index m, const TrialSeed& seed, std::uint64_t attempt) {
  if (m < 1) throw InvalidArgument("support length must be at least 1");
  auto rng = seed.engine(Stream::support, attempt);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Support s(static_cast<std::size_t>(m));
  // Pr{active} = 1 - p in the steady state.
  s[0] = unit(rng) < 1.0 - markov.p() ? 1 : 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double u = unit(rng);
    if (s[i - 1]) {
      s[i] = u < markov.p01() ? 0 : 1;
    } else {
      s[i] = u < markov.p10() ? 1 : 0;
    }
  }
  return s;
}

Vector sample_amplitudes(double sigma_theta, Eigen::Index m, const TrialSeed& seed, std::uint64_t attempt) {
  if (!(sigma_theta > 0.0)) throw InvalidArgument("sigma_theta must be positive");
  auto rng = seed.engine(Stream::amplitudes, attempt);
  std::normal_distribution<double> gauss(0.0, sigma_theta);
  Vector theta(m);
  for (Eigen::Index i = 0; i < m; ++i) theta[i] = gauss(rng);
  return theta;
}

Matrix sample_matrix(Eigen::Index n, Eigen::Index m, const TrialSeed& seed) {
  if (n < 1 || m < 1) throw InvalidArgument("matrix dimensions must be positive");
  auto rng = seed.engine(Stream::matrix);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  Matrix phi(n, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    double norm = 0.0;
    do {
      for (Eigen::Index i = 0; i < n; ++i) phi(i, j) = entry(rng);
      norm = phi.col(j).norm();
    } while (norm == 0.0);
    phi.col(j) /= norm;
  }
  return phi;
}

NoisyMeasurement measure_with_snr(const Matrix& phi, const Vector& w_gen, double snr_db, const TrialSeed& seed) {
  if (phi.cols() != w_gen.size()) throw InvalidArgument("w_gen length must equal the column count of phi");
  if (!std::isfinite(snr_db)) throw InvalidArgument("target SNR must be finite");
  const Vector clean = phi * w_gen;
  const double signal_norm = clean.norm();
  if (signal_norm == 0.0) throw InvalidArgument("phi * w_gen is zero; SNR is undefined");

  auto rng = seed.engine(Stream::noise);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector direction(phi.rows());
  double direction_norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < direction.size(); ++i) direction[i] = gauss(rng);
    direction_norm = direction.norm();
  } while (direction_norm == 0.0);

  const double noise_norm = signal_norm / std::pow(10.0, snr_db / 20.0);
  NoisyMeasurement out;
  out.noise = direction * (noise_norm / direction_norm);
  out.y = clean + out.noise;
  out.sigma_n = noise_norm / std::sqrt(static_cast<double>(phi.rows()));
  return out;
}

SyntheticTrial generate_trial(const TrialSpec& spec, const TrialSeed& seed, int max_attempts) {
  Matrix phi = sample_matrix(spec.n, spec.m, seed);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const auto a = static_cast<std::uint64_t>(attempt);
    Support s = sample_support(spec.markov, spec.m, seed, a);
    if (support_size(s) == 0) continue;
    SparseSignal signal(std::move(s), sample_amplitudes(spec.sigma_theta, spec.m, seed, a));
    if ((phi * signal.w()).norm() == 0.0) continue;
    NoisyMeasurement measurement = measure_with_snr(phi, signal.w(), spec.snr_db, seed);
    return SyntheticTrial{std::move(phi), std::move(signal), std::move(measurement), attempt};
  }
  throw NumericalError("could not draw a non-zero signal; the support chain is likely absorbing at 0");
}

}  // namespace bbhta
