#pragma once

#include <span>

#include "bbhta/model.hpp"

namespace bbhta {

/// Stand-in for -inf dB when the estimate is exact.
inline constexpr double kExactRecoveryNmseDb = -300.0;

/// 10 log10(||w_hat - w_gen||^2 / ||w_gen||^2). Throws InvalidArgument when
/// w_gen is zero.
double nmse_db(const Vector& w_hat, const Vector& w_gen);

/// 20 log10(||clean|| / ||noise||).
double snr_db(const Vector& clean, const Vector& noise);

/// Harmonic mean of support precision and recall. Two empty supports score 1.
double support_f1(std::span<const std::uint8_t> s_hat, std::span<const std::uint8_t> s_true);

}  // namespace bbhta
