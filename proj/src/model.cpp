#include "bbhta/model.hpp"

#include <cmath>
#include <sstream>

namespace bbhta {

namespace {

void require_probability(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    std::ostringstream msg;
    msg << name << " must lie in [0, 1], got " << value;
    throw InvalidArgument(msg.str());
  }
}

}  // namespace

MarkovChainParams::MarkovChainParams(double p, double p10, double p01) : p_(p), p10_(p10), p01_(p01) {
  require_probability(p_, "p");
  require_probability(p10_, "p10");
  require_probability(p01_, "p01");
  if (std::abs(p01_ * (1.0 - p_) - p_ * p10_) > 1e-12) {
    std::ostringstream msg;
    msg << "inconsistent Markov parameters: p01*(1-p) = " << p01_ * (1.0 - p_) << " but p*p10 = " << p_ * p10_;
    throw InvalidArgument(msg.str());
  }
}

MarkovChainParams MarkovChainParams::from_p_p10(double p, double p10) {
  require_probability(p, "p");
  require_probability(p10, "p10");
  if (p == 1.0) {
    if (p10 != 0.0) throw InvalidArgument("p = 1 requires p10 = 0");
    return MarkovChainParams(p, 0.0, 1.0);
  }
  const double p01 = p * p10 / (1.0 - p);
  if (p01 > 1.0) {
    std::ostringstream msg;
    msg << "(p, p10) = (" << p << ", " << p10 << ") implies p01 = " << p01 << " > 1";
    throw InvalidArgument(msg.str());
  }
  return MarkovChainParams(p, p10, p01);
}

MarkovChainParams MarkovChainParams::from_p_p01(double p, double p01) {
  require_probability(p, "p");
  require_probability(p01, "p01");
  if (p == 0.0) {
    if (p01 != 0.0) throw InvalidArgument("p = 0 requires p01 = 0");
    return MarkovChainParams(p, 1.0, 0.0);
  }
  const double p10 = p01 * (1.0 - p) / p;
  if (p10 > 1.0) {
    std::ostringstream msg;
    msg << "(p, p01) = (" << p << ", " << p01 << ") implies p10 = " << p10 << " > 1";
    throw InvalidArgument(msg.str());
  }
  return MarkovChainParams(p, p10, p01);
}

MarkovChainParams MarkovChainParams::from_transitions(double p10, double p01) {
  require_probability(p10, "p10");
  require_probability(p01, "p01");
  if (p10 + p01 <= 0.0) throw InvalidArgument("p10 + p01 must be positive to define a steady state");
  return MarkovChainParams(p01 / (p10 + p01), p10, p01);
}

BghmmModel::BghmmModel(MarkovChainParams markov, double sigma_theta, double sigma_n)
    : markov_(markov), sigma_theta_(sigma_theta), sigma_n_(sigma_n) {
  if (!(sigma_theta_ > 0.0) || !std::isfinite(sigma_theta_)) throw InvalidArgument("sigma_theta must be positive");
  if (!(sigma_n_ >= 0.0) || !std::isfinite(sigma_n_)) throw InvalidArgument("sigma_n must be non-negative");
}

SparseSignal::SparseSignal(Support s, Vector theta) : s_(std::move(s)), theta_(std::move(theta)) {
  if (static_cast<Eigen::Index>(s_.size()) != theta_.size()) throw InvalidArgument("support and amplitude lengths differ");
  w_.resize(theta_.size());
  for (Eigen::Index i = 0; i < theta_.size(); ++i) {
    const auto si = s_[static_cast<std::size_t>(i)];
    if (si > 1) throw InvalidArgument("support entries must be 0 or 1");
    w_[i] = si ? theta_[i] : 0.0;
  }
}

MeasurementSystem::MeasurementSystem(Matrix phi, Vector y) : phi_(std::move(phi)), y_(std::move(y)) {
  if (phi_.rows() != y_.size()) throw InvalidArgument("phi row count must equal length of y");
  if (phi_.rows() == 0 || phi_.cols() == 0) throw InvalidArgument("phi must be non-empty");
  for (Eigen::Index j = 0; j < phi_.cols(); ++j) {
    const double norm = phi_.col(j).norm();
    if (std::abs(norm - 1.0) > kColumnNormTolerance) {
      std::ostringstream msg;
      msg << "column " << j << " of phi has norm " << norm << ", expected 1";
      throw InvalidArgument(msg.str());
    }
  }
}

std::string to_string(RuleVariant variant) {
  return variant == RuleVariant::derived ? "derived" : "printed";
}

RuleVariant parse_rule_variant(const std::string& text) {
  if (text == "derived") return RuleVariant::derived;
  if (text == "printed" || text == "paper_literal") return RuleVariant::printed;
  throw InvalidArgument("unknown rule variant '" + text + "' (expected derived or printed)");
}

void SolverConfig::validate() const {
  if (k_max < 1) throw InvalidArgument("k_max must be at least 1");
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (!(p_init >= 0.5 && p_init <= 1.0)) throw InvalidArgument("p_init must lie in [0.5, 1]");
  if (!(p01_init > 0.0 && p01_init < 1.0)) throw InvalidArgument("p01_init must lie in (0, 1)");
}

Vector rank_one_inverse_apply(const Vector& v, const Vector& phi_col, double sigma_n, double sigma_theta) {
  if (v.size() != phi_col.size()) throw InvalidArgument("v and phi_col lengths differ");
  if (!(sigma_n > 0.0)) throw NumericalError("singular covariance: sigma_n must be positive");
  const double inv_noise = 1.0 / (sigma_n * sigma_n);
  if (sigma_theta == 0.0) return inv_noise * v;
  const double ratio = sigma_n / sigma_theta;
  const double gain = inv_noise / (1.0 + ratio * ratio);
  return inv_noise * v - gain * phi_col.dot(v) * phi_col;
}

double log_det_ratio(double sigma_n, double sigma_theta) {
  if (!(sigma_n > 0.0)) throw NumericalError("sigma_n must be positive");
  if (!(sigma_theta >= 0.0)) throw InvalidArgument("sigma_theta must be non-negative");
  const double r = sigma_theta / sigma_n;
  return std::log1p(r * r);
}

std::size_t support_size(std::span<const std::uint8_t> s) {
  std::size_t count = 0;
  for (auto v : s) count += v != 0;
  return count;
}

}  // namespace bbhta
