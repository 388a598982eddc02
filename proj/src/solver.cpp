#include "bbhta/solver.hpp"

#include <cmath>
#include <sstream>

#include "bbhta/estimate.hpp"

namespace bbhta {

namespace {

struct Problem {
  Matrix phi;
  /// Original column norms when phi had to be normalized, empty otherwise.
  Vector column_scale;
};

Problem prepare(const Vector& y, const Matrix& phi, std::vector<std::string>& warnings) {
  if (phi.rows() == 0 || phi.cols() == 0) throw InvalidArgument("phi must be non-empty");
  if (phi.rows() != y.size()) throw InvalidArgument("phi row count must equal length of y");
  if (!phi.allFinite() || !y.allFinite()) throw InvalidArgument("phi and y must be finite");

  const Vector norms = phi.colwise().norm().transpose();
  if ((norms.array() == 0.0).any()) throw InvalidArgument("phi has an all-zero column");
  if (((norms.array() - 1.0).abs() <= MeasurementSystem::kColumnNormTolerance).all()) return {phi, {}};

  std::ostringstream msg;
  msg << "phi columns are not unit-norm (range " << norms.minCoeff() << " .. " << norms.maxCoeff()
      << "); normalized internally and the estimate rescaled to the original columns";
  warnings.push_back(msg.str());
  return {phi * norms.cwiseInverse().asDiagonal(), norms};
}

void rescale(SolverOutput& out, const Vector& column_scale) {
  if (column_scale.size() == 0) return;
  out.theta_hat = out.theta_hat.cwiseQuotient(column_scale);
  out.w_hat = out.w_hat.cwiseQuotient(column_scale);
}

MarkovChainParams detection_chain(SolverKind kind, const MarkovEstimate& est) {
  if (kind == SolverKind::bpa_iid) return MarkovChainParams::memoryless(est.p);
  return MarkovChainParams::from_transitions(est.p10, est.p01);
}

SolverOutput run_loop(const Vector& y, const Matrix& phi_in, const SolverConfig& config, SolverKind kind) {
  config.validate();
  SolverOutput out;
  out.variant = config.rule_variant;
  const Problem problem = prepare(y, phi_in, out.warnings);
  const Matrix& phi = problem.phi;
  const Eigen::Index n = phi.rows();
  const Eigen::Index m = phi.cols();

  out.s_hat.assign(static_cast<std::size_t>(m), 0);
  out.theta_hat = Vector::Zero(m);
  out.w_hat = Vector::Zero(m);
  if (y.squaredNorm() == 0.0) return out;

  MarkovEstimate markov;
  markov.p = clamp_probability(config.p_init);
  markov.p01 = clamp_probability(config.p01_init);
  markov.p10 = clamp_probability(config.p01_init * (1.0 - markov.p) / markov.p);
  double sigma_theta = update_theta_sigma(y, n, m, markov.p);
  double sigma_n = sigma_theta / 5.0;

  Vector w_prev = minimum_norm_solution(y, phi);
  Support s = out.s_hat;

  for (int k = 1; k <= config.k_max; ++k) {
    const BghmmModel model(detection_chain(kind, markov), sigma_theta, sigma_n);
    out.threshold_trace.push_back(thresholds(model, config.rule_variant));

    s = sweep_support(y, phi, w_prev, s, model, config.rule_variant);
    const LmmseEstimate lmmse = lmmse_amplitudes(y, phi, s, sigma_n, sigma_theta);
    const Vector w = compose_signal(s, lmmse.theta);

    if (config.learn_params) {
      markov = update_markov(s, markov);
      sigma_theta = update_theta_sigma(y, n, m, markov.p);
      sigma_n = update_noise_sigma(y, phi, w, sigma_theta);
    }
    out.hyper_trace.push_back({sigma_n, sigma_theta, markov.p, markov.p10, markov.p01});

    const double w_norm = w.norm();
    double difference;
    if (w_norm > 0.0) {
      difference = (w - w_prev).norm() / w_norm;
    } else {
      difference = w_prev.norm() == 0.0 ? 0.0 : 1.0;
    }

    out.s_hat = s;
    out.theta_hat = lmmse.theta;
    out.w_hat = w;
    out.iterations = k;
    out.final_difference = difference;
    if (difference < config.epsilon) break;
    w_prev = w;
  }

  rescale(out, problem.column_scale);
  return out;
}

}  // namespace

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::block_bhta: return "block-bhta";
    case SolverKind::bpa_iid: return "bpa-iid";
    case SolverKind::oracle_lmmse: return "oracle-lmmse";
  }
  return "unknown";
}

SolverKind parse_solver_kind(const std::string& text) {
  if (text == "block-bhta") return SolverKind::block_bhta;
  if (text == "bpa-iid") return SolverKind::bpa_iid;
  if (text == "oracle-lmmse") return SolverKind::oracle_lmmse;
  throw InvalidArgument("unknown solver '" + text + "' (expected block-bhta, bpa-iid or oracle-lmmse)");
}

Vector minimum_norm_solution(const Vector& y, const Matrix& phi) {
  if (phi.rows() > phi.cols()) {
    return phi.completeOrthogonalDecomposition().solve(y);
  }
  const Matrix gram = phi * phi.transpose();
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) throw NumericalError("initialization failed: phi * phi' is singular");
  const Vector u = llt.solve(y);
  if (!u.allFinite()) throw NumericalError("initialization failed: phi * phi' is singular");
  return phi.transpose() * u;
}

SolverOutput run_block_bhta(const Vector& y, const Matrix& phi, const SolverConfig& config) {
  return run_loop(y, phi, config, SolverKind::block_bhta);
}

SolverOutput run_bpa_baseline(const Vector& y, const Matrix& phi, const SolverConfig& config) {
  return run_loop(y, phi, config, SolverKind::bpa_iid);
}

SolverOutput run_oracle_support_lmmse(const Vector& y, const Matrix& phi, const Support& s_true,
                                      const BghmmModel& model) {
  if (static_cast<Eigen::Index>(s_true.size()) != phi.cols()) throw InvalidArgument("true support length must equal M");
  SolverOutput out;
  const LmmseEstimate lmmse = lmmse_amplitudes(y, phi, s_true, model.sigma_n(), model.sigma_theta());
  out.s_hat = s_true;
  out.theta_hat = lmmse.theta;
  out.w_hat = compose_signal(s_true, lmmse.theta);
  out.iterations = 1;
  out.final_difference = 0.0;
  const auto& mk = model.markov();
  out.hyper_trace.push_back({model.sigma_n(), model.sigma_theta(), mk.p(), mk.p10(), mk.p01()});
  return out;
}

}  // namespace bbhta
