#pragma once

// Brute-force hypothesis posteriors for one sample pair. Every Gaussian
// likelihood is evaluated from an explicitly assembled N x N covariance and
// its Cholesky factor; nothing here depends on the simplified detector
// thresholds. Intended for small N (verification, not production).

#include "bbhta/model.hpp"

namespace bbhta::oracle {

/// Log-posteriors up to a common additive constant.
struct StartScores {
  double log_h00 = 0.0;
  double log_h01 = 0.0;
  double difference() const { return log_h01 - log_h00; }
};

struct EndScores {
  double log_h10 = 0.0;
  double log_h11 = 0.0;
  double difference() const { return log_h10 - log_h11; }
};

/// ln N(x; 0, cov) from an explicit Cholesky factorization.
double gaussian_log_density(const Vector& x, const Matrix& cov);

/// Scores for (s_i, s_{i+1}) in {00, 01}, where `next` is i+1 and `prev` is
/// i. prev = -1 denotes the virtual inactive sample before index 0.
StartScores score_start_pair(const Vector& y, const Matrix& phi, const Vector& w, Eigen::Index prev,
                             Eigen::Index next, const BghmmModel& model);

/// Scores for (s_i, s_{i+1}) in {10, 11}.
EndScores score_end_pair(const Vector& y, const Matrix& phi, const Vector& w, Eigen::Index next,
                         const BghmmModel& model);

}  // namespace bbhta::oracle
