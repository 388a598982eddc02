#pragma once

// Shared domain types for block-sparse recovery under a Bernoulli-Gaussian
// hidden Markov prior, plus the rank-one covariance identities used by the
// hypothesis tests.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bbhta {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Binary support vector; entries are 0 or 1.
using Support = std::vector<std::uint8_t>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Singular or non-positive-definite systems, non-finite intermediates.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Transition structure of the support chain.
///
/// p is the steady-state probability of an inactive sample, p10 the
/// probability of switching inactive -> active and p01 active -> inactive.
/// Instances always satisfy p01 * (1 - p) == p * p10 up to rounding of the
/// derived member.
class MarkovChainParams {
 public:
  /// Derives p01 = p * p10 / (1 - p). For p == 1 the chain never leaves the
  /// inactive state; p10 must then be 0 and p01 is set to 1.
  static MarkovChainParams from_p_p10(double p, double p10);

  /// Derives p10 = p01 * (1 - p) / p. For p == 0 the chain never leaves the
  /// active state; p01 must then be 0 and p10 is set to 1.
  static MarkovChainParams from_p_p01(double p, double p01);

  /// Steady state p = p01 / (p10 + p01). Requires p10 + p01 > 0.
  static MarkovChainParams from_transitions(double p10, double p01);

  /// Memoryless chain: transitions equal the steady-state probabilities.
  static MarkovChainParams memoryless(double p) { return from_transitions(1.0 - p, p); }

  double p() const { return p_; }
  double p10() const { return p10_; }
  double p01() const { return p01_; }
  double p00() const { return 1.0 - p10_; }
  double p11() const { return 1.0 - p01_; }

 private:
  MarkovChainParams(double p, double p10, double p01);

  double p_;
  double p10_;
  double p01_;
};

/// Markov support prior plus amplitude and noise scales.
class BghmmModel {
 public:
  BghmmModel(MarkovChainParams markov, double sigma_theta, double sigma_n);

  const MarkovChainParams& markov() const { return markov_; }
  double sigma_theta() const { return sigma_theta_; }
  double sigma_n() const { return sigma_n_; }

 private:
  MarkovChainParams markov_;
  double sigma_theta_;
  double sigma_n_;
};

/// Support, amplitudes and their product w_i = s_i * theta_i.
class SparseSignal {
 public:
  SparseSignal(Support s, Vector theta);

  const Support& s() const { return s_; }
  const Vector& theta() const { return theta_; }
  const Vector& w() const { return w_; }
  Eigen::Index size() const { return theta_.size(); }

 private:
  Support s_;
  Vector theta_;
  Vector w_;
};

/// Measurement matrix with unit-norm columns and its observation vector.
class MeasurementSystem {
 public:
  static constexpr double kColumnNormTolerance = 1e-10;

  /// Throws InvalidArgument on shape mismatch or a column whose norm is not
  /// 1 within kColumnNormTolerance.
  MeasurementSystem(Matrix phi, Vector y);

  const Matrix& phi() const { return phi_; }
  const Vector& y() const { return y_; }
  Eigen::Index rows() const { return phi_.rows(); }
  Eigen::Index cols() const { return phi_.cols(); }

 private:
  Matrix phi_;
  Vector y_;
};

enum class RuleVariant { derived, printed };

std::string to_string(RuleVariant variant);
RuleVariant parse_rule_variant(const std::string& text);

struct SolverConfig {
  int k_max = 50;
  double epsilon = 1e-4;
  double p_init = 0.9;
  /// Initial active -> inactive transition probability. The matching p10
  /// follows from the steady-state relation with p_init.
  double p01_init = 0.1;
  RuleVariant rule_variant = RuleVariant::derived;
  bool learn_params = true;

  /// Throws InvalidArgument when a field is out of range.
  void validate() const;
};

/// Sigma^{-1} v for Sigma = sigma_n^2 I + sigma_theta^2 phi phi^T with unit
/// phi, via the matrix inversion lemma. Never forms the N x N matrix.
Vector rank_one_inverse_apply(const Vector& v, const Vector& phi_col, double sigma_n,
                              double sigma_theta);

/// ln(det(Sigma) / sigma_n^{2N}) = ln(1 + sigma_theta^2 / sigma_n^2) for a
/// unit-norm column.
double log_det_ratio(double sigma_n, double sigma_theta);

/// Number of nonzero entries.
std::size_t support_size(std::span<const std::uint8_t> s);

}  // namespace bbhta
