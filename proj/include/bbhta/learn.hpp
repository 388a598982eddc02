#pragma once

// Closed-form hyperparameter re-estimation from the current iterate.

#include <span>

#include "bbhta/model.hpp"

namespace bbhta {

/// Learned probabilities are kept in [kProbabilityFloor, 1 - kProbabilityFloor].
inline constexpr double kProbabilityFloor = 1e-4;

/// sigma_n estimates are floored at this multiple of the sigma_theta estimate.
inline constexpr double kNoiseFloorRatio = 1e-8;

struct HyperEstimates {
  double sigma_n = 0.0;
  double sigma_theta = 0.0;
  double p = 0.0;
  double p10 = 0.0;
  double p01 = 0.0;
};

struct MarkovEstimate {
  double p = 0.0;
  double p10 = 0.0;
  double p01 = 0.0;
};

double clamp_probability(double value);

/// ||y - phi w|| / sqrt(N), floored at kNoiseFloorRatio * sigma_theta_hat.
double update_noise_sigma(const Vector& y, const Matrix& phi, const Vector& w_hat, double sigma_theta_hat);

/// sqrt(N * mean(y_j^2) / (M * (1 - p_hat))), with p_hat capped at
/// 1 - kProbabilityFloor.
double update_theta_sigma(const Vector& y, Eigen::Index n, Eigen::Index m, double p_hat);

/// p = 1 - ||s||_0 / M (fraction of inactive samples) and transition-count
/// ratios over the M - 1 consecutive pairs. A ratio with an empty
/// denominator keeps the value from `previous`. All outputs are clamped.
MarkovEstimate update_markov(std::span<const std::uint8_t> s_hat, const MarkovEstimate& previous);

}  // namespace bbhta
