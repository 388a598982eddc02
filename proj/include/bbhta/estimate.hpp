#pragma once

#include <span>

#include "bbhta/model.hpp"

namespace bbhta {

struct LmmseDiagnostics {
  /// Relative residual ||A u - b|| / ||b|| of the factorized system.
  double solve_residual = 0.0;
  std::size_t support_size = 0;
  /// Order of the factorized system: |support| or N, whichever is smaller.
  Eigen::Index system_order = 0;
};

struct LmmseEstimate {
  Vector theta;
  LmmseDiagnostics diagnostics;
};

/// Linear MMSE amplitudes for a fixed support:
///
///   theta = st^2 S phi' (sn^2 I_N + st^2 phi S phi')^{-1} y,  S = diag(s).
///
/// Only the support columns phi_S enter. When |S| <= N the equivalent
/// |S| x |S| system (phi_S' phi_S + (sn/st)^2 I) theta_S = phi_S' y is
/// factorized instead; otherwise the N x N system. Both are SPD for
/// sn > 0. Entries off the support are exactly zero. Throws NumericalError
/// when the system is not numerically positive definite (sn = 0 with
/// dependent support columns).
LmmseEstimate lmmse_amplitudes(const Vector& y, const Matrix& phi, std::span<const std::uint8_t> s_hat, double sigma_n,
                               double sigma_theta);

/// Elementwise s .* theta.
Vector compose_signal(std::span<const std::uint8_t> s, const Vector& theta);

}  // namespace bbhta
