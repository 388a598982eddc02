#include "bbhta/oracle.hpp"

#include <cmath>
#include <numbers>

namespace bbhta::oracle {

namespace {

// y minus the contribution of every column except those listed.
Vector mean_removed(const Vector& y, const Matrix& phi, const Vector& w, Eigen::Index skip_a, Eigen::Index skip_b) {
  Vector mean = Vector::Zero(y.size());
  for (Eigen::Index j = 0; j < phi.cols(); ++j) {
    if (j == skip_a || j == skip_b) continue;
    mean += phi.col(j) * w[j];
  }
  return y - mean;
}

Matrix noise_covariance(Eigen::Index n, double sigma_n) {
  return Matrix::Identity(n, n) * (sigma_n * sigma_n);
}

Matrix active_covariance(const Vector& column, double sigma_n, double sigma_theta) {
  Matrix cov = column * column.transpose() * (sigma_theta * sigma_theta);
  cov.diagonal().array() += sigma_n * sigma_n;
  return cov;
}

void check_inputs(const Vector& y, const Matrix& phi, const Vector& w, Eigen::Index next, const BghmmModel& model) {
  if (phi.rows() != y.size() || phi.cols() != w.size()) throw InvalidArgument("oracle: inconsistent shapes");
  if (next < 0 || next >= phi.cols()) throw InvalidArgument("oracle: index out of range");
  if (!(model.sigma_n() > 0.0)) throw InvalidArgument("oracle: sigma_n must be positive");
}

}  // namespace

double gaussian_log_density(const Vector& x, const Matrix& cov) {
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) throw NumericalError("oracle: covariance is not positive definite");
  const Matrix l = llt.matrixL();
  const Vector white = l.triangularView<Eigen::Lower>().solve(x);
  const double log_det = 2.0 * l.diagonal().array().log().sum();
  const double n = static_cast<double>(x.size());
  return -0.5 * (n * std::log(2.0 * std::numbers::pi) + log_det + white.squaredNorm());
}

StartScores score_start_pair(const Vector& y, const Matrix& phi, const Vector& w, Eigen::Index prev,
                             Eigen::Index next, const BghmmModel& model) {
  check_inputs(y, phi, w, next, model);
  const auto& mk = model.markov();
  const Vector x = mean_removed(y, phi, w, prev, next);
  const Eigen::Index n = y.size();

  StartScores out;
  out.log_h00 = std::log(mk.p()) + std::log(mk.p00()) + gaussian_log_density(x, noise_covariance(n, model.sigma_n()));
  out.log_h01 = std::log(mk.p()) + std::log(mk.p10()) +
                gaussian_log_density(x, active_covariance(phi.col(next), model.sigma_n(), model.sigma_theta()));
  return out;
}

EndScores score_end_pair(const Vector& y, const Matrix& phi, const Vector& w, Eigen::Index next,
                         const BghmmModel& model) {
  check_inputs(y, phi, w, next, model);
  const auto& mk = model.markov();
  const Vector z = mean_removed(y, phi, w, next, -1);
  const Eigen::Index n = y.size();

  EndScores out;
  out.log_h10 =
      std::log(1.0 - mk.p()) + std::log(mk.p01()) + gaussian_log_density(z, noise_covariance(n, model.sigma_n()));
  out.log_h11 = std::log(1.0 - mk.p()) + std::log(mk.p11()) +
                gaussian_log_density(z, active_covariance(phi.col(next), model.sigma_n(), model.sigma_theta()));
  return out;
}

}  // namespace bbhta::oracle
