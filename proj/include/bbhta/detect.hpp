#pragma once

// Support detection by binary Bayesian hypothesis tests on consecutive
// sample pairs (s_i, s_{i+1}):
//   start of block: H01 vs H00, activity rule (x' phi)^2 > th_start
//   end of block:   H10 vs H11, inactivity rule (z' phi)^2 < th_end
// x excludes columns {i, i+1} from the fitted signal, z excludes {i+1}.

#include <span>

#include "bbhta/model.hpp"

namespace bbhta {

/// Threshold values may be +/-infinity. A +inf start threshold never
/// activates, -inf always activates; for the end rule the direction of the
/// comparison decides (derived: -inf never deactivates, +inf always does).
struct ThresholdPair {
  double th_start = 0.0;
  double th_end = 0.0;
  RuleVariant variant = RuleVariant::derived;
};

/// Throws InvalidArgument unless sigma_n > 0 and sigma_theta > 0.
double threshold_start(const BghmmModel& model, RuleVariant variant);
double threshold_end(const BghmmModel& model, RuleVariant variant);
ThresholdPair thresholds(const BghmmModel& model, RuleVariant variant);

/// y - phi * w + sum_{j in excluded} phi_j w_j.
Vector residual_excluding(const Vector& y, const Matrix& phi, const Vector& w, std::span<const Eigen::Index> excluded);

/// True declares the sample active.
bool start_test(const Vector& x, const Vector& phi_col, double th_start);

/// True declares the sample inactive. The printed variant compares with ">"
/// instead of "<".
bool end_test(const Vector& z, const Vector& phi_col, double th_end, RuleVariant variant);

/// One ascending pass over pairs (j-1, j), j = 0..M-1, with a virtual
/// inactive sample before index 0. Activity wins over inactivity; when
/// neither rule fires the previous value is kept. Residuals use w_current
/// throughout the pass.
Support sweep_support(const Vector& y, const Matrix& phi, const Vector& w_current, const Support& s_current,
                      const BghmmModel& model, RuleVariant variant);

}  // namespace bbhta
