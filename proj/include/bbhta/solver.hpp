#pragma once

// Block-BHTA outer loop: hypothesis-test support sweep, LMMSE amplitudes and
// closed-form hyperparameter updates, iterated until the relative change of
// the signal estimate drops below epsilon.

#include <string>
#include <vector>

#include "bbhta/detect.hpp"
#include "bbhta/learn.hpp"
#include "bbhta/model.hpp"

namespace bbhta {

enum class SolverKind { block_bhta, bpa_iid, oracle_lmmse };

std::string to_string(SolverKind kind);
SolverKind parse_solver_kind(const std::string& text);

struct SolverOutput {
  Vector w_hat;
  Support s_hat;
  Vector theta_hat;
  int iterations = 0;
  double final_difference = 0.0;
  /// Hyperparameters after each iteration's update step.
  std::vector<HyperEstimates> hyper_trace;
  /// Thresholds used by each iteration's sweep.
  std::vector<ThresholdPair> threshold_trace;
  RuleVariant variant = RuleVariant::derived;
  std::vector<std::string> warnings;
};

SolverOutput run_block_bhta(const Vector& y, const Matrix& phi, const SolverConfig& config);

/// Same loop with the support chain forced to be memoryless
/// (p10 = 1 - p, p01 = p), which removes the coupling between neighbours.
SolverOutput run_bpa_baseline(const Vector& y, const Matrix& phi, const SolverConfig& config);

/// One LMMSE pass on a known support. Benchmark comparator only.
SolverOutput run_oracle_support_lmmse(const Vector& y, const Matrix& phi, const Support& s_true,
                                      const BghmmModel& model);

/// Minimum-norm least-squares solution phi' (phi phi')^{-1} y, used as the
/// starting iterate. Falls back to a complete orthogonal decomposition when
/// N > M. Throws NumericalError when phi phi' is singular for N <= M.
Vector minimum_norm_solution(const Vector& y, const Matrix& phi);

}  // namespace bbhta
