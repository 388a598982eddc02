#include "bbhta/learn.hpp"

#include <algorithm>
#include <cmath>

namespace bbhta {

double clamp_probability(double value) {
  return std::clamp(value, kProbabilityFloor, 1.0 - kProbabilityFloor);
}

double update_noise_sigma(const Vector& y, const Matrix& phi, const Vector& w_hat, double sigma_theta_hat) {
  if (phi.rows() != y.size() || phi.cols() != w_hat.size()) throw InvalidArgument("update_noise_sigma: inconsistent shapes");
  const double rms = (y - phi * w_hat).norm() / std::sqrt(static_cast<double>(y.size()));
  return std::max(rms, kNoiseFloorRatio * sigma_theta_hat);
}

double update_theta_sigma(const Vector& y, Eigen::Index n, Eigen::Index m, double p_hat) {
  if (n < 1 || m < 1 || y.size() == 0) throw InvalidArgument("update_theta_sigma: empty dimensions");
  const double p = std::min(p_hat, 1.0 - kProbabilityFloor);
  const double mean_square = y.squaredNorm() / static_cast<double>(y.size());
  return std::sqrt(static_cast<double>(n) * mean_square / (static_cast<double>(m) * (1.0 - p)));
}

MarkovEstimate update_markov(std::span<const std::uint8_t> s_hat, const MarkovEstimate& previous) {
  if (s_hat.empty()) throw InvalidArgument("update_markov: empty support");
  const std::size_t m = s_hat.size();

  std::size_t zeros_before = 0, ones_before = 0, rises = 0, falls = 0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const bool cur = s_hat[i] != 0;
    const bool next = s_hat[i + 1] != 0;
    if (cur) {
      ++ones_before;
      falls += !next;
    } else {
      ++zeros_before;
      rises += next;
    }
  }

  MarkovEstimate out;
  out.p = clamp_probability(1.0 - static_cast<double>(support_size(s_hat)) / static_cast<double>(m));
  out.p10 = zeros_before > 0 ? static_cast<double>(rises) / static_cast<double>(zeros_before) : previous.p10;
  out.p01 = ones_before > 0 ? static_cast<double>(falls) / static_cast<double>(ones_before) : previous.p01;
  out.p10 = clamp_probability(out.p10);
  out.p01 = clamp_probability(out.p01);
  return out;
}

}  // namespace bbhta
