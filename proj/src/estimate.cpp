#include "bbhta/estimate.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace bbhta {

namespace {

// LLT succeeds on matrices that are only positive semi-definite up to
// rounding; treat tiny pivots as failure.
void check_factorization(const Eigen::LLT<Matrix>& llt, Eigen::Index order) {
  if (llt.info() != Eigen::Success) throw NumericalError("LMMSE system is not positive definite");
  const auto diag = llt.matrixLLT().diagonal();
  const double hi = diag.maxCoeff();
  const double lo = diag.minCoeff();
  const double floor = static_cast<double>(order) * std::numeric_limits<double>::epsilon();
  if (!(lo > 0.0) || (lo * lo) / (hi * hi) < floor) {
    std::ostringstream msg;
    msg << "LMMSE system is numerically singular (pivot ratio " << lo / hi << ")";
    throw NumericalError(msg.str());
  }
}

double relative_residual(const Matrix& a, const Vector& u, const Vector& b) {
  const double bn = b.norm();
  const double rn = (a * u - b).norm();
  return bn > 0.0 ? rn / bn : rn;
}

}  // namespace

LmmseEstimate lmmse_amplitudes(const Vector& y, const Matrix& phi, std::span<const std::uint8_t> s_hat, double sigma_n,
                               double sigma_theta) {
  const Eigen::Index n = phi.rows();
  const Eigen::Index m = phi.cols();
  if (y.size() != n || static_cast<Eigen::Index>(s_hat.size()) != m) throw InvalidArgument("lmmse: inconsistent shapes");
  if (!(sigma_n >= 0.0)) throw InvalidArgument("lmmse: sigma_n must be non-negative");
  if (!(sigma_theta > 0.0)) throw InvalidArgument("lmmse: sigma_theta must be positive");

  std::vector<Eigen::Index> active;
  for (Eigen::Index j = 0; j < m; ++j) {
    if (s_hat[static_cast<std::size_t>(j)]) active.push_back(j);
  }

  LmmseEstimate out;
  out.theta = Vector::Zero(m);
  out.diagnostics.support_size = active.size();
  const auto k = static_cast<Eigen::Index>(active.size());
  if (k == 0) return out;

  Matrix phi_s(n, k);
  for (Eigen::Index c = 0; c < k; ++c) phi_s.col(c) = phi.col(active[static_cast<std::size_t>(c)]);

  Vector theta_s;
  if (k <= n) {
    const double ratio = sigma_n / sigma_theta;
    Matrix gram = phi_s.transpose() * phi_s;
    gram.diagonal().array() += ratio * ratio;
    const Vector rhs = phi_s.transpose() * y;
    Eigen::LLT<Matrix> llt(gram);
    check_factorization(llt, k);
    theta_s = llt.solve(rhs);
    out.diagnostics.solve_residual = relative_residual(gram, theta_s, rhs);
    out.diagnostics.system_order = k;
  } else {
    const double st2 = sigma_theta * sigma_theta;
    Matrix cov = st2 * (phi_s * phi_s.transpose());
    cov.diagonal().array() += sigma_n * sigma_n;
    Eigen::LLT<Matrix> llt(cov);
    check_factorization(llt, n);
    const Vector u = llt.solve(y);
    theta_s = st2 * (phi_s.transpose() * u);
    out.diagnostics.solve_residual = relative_residual(cov, u, y);
    out.diagnostics.system_order = n;
  }
  if (!theta_s.allFinite()) throw NumericalError("LMMSE produced non-finite amplitudes");

  for (Eigen::Index c = 0; c < k; ++c) out.theta[active[static_cast<std::size_t>(c)]] = theta_s[c];
  return out;
}

Vector compose_signal(std::span<const std::uint8_t> s, const Vector& theta) {
  if (static_cast<Eigen::Index>(s.size()) != theta.size()) throw InvalidArgument("compose_signal: length mismatch");
  Vector w(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) w[i] = s[static_cast<std::size_t>(i)] ? theta[i] : 0.0;
  return w;
}

}  // namespace bbhta
