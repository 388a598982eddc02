#include "bbhta/detect.hpp"

#include <cmath>
#include <limits>

namespace bbhta {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_scales(const BghmmModel& model) {
  if (!(model.sigma_n() > 0.0)) throw InvalidArgument("thresholds require sigma_n > 0");
  if (!(model.sigma_theta() > 0.0)) throw InvalidArgument("thresholds require sigma_theta > 0");
}

// 2 sn^2 (1 + sn^2/st^2) * ln((num/den) * sqrt(q)), with q = 1 + st^2/sn^2
// for the derived form and 1 + sn^2/st^2 as printed.
double threshold_formula(double num, double den, const BghmmModel& model, RuleVariant variant) {
  if (num == 0.0 && den == 0.0) throw InvalidArgument("both transition probabilities in the prior ratio are zero");
  if (num == 0.0) return -kInf;
  if (den == 0.0) return kInf;
  const double sn2 = model.sigma_n() * model.sigma_n();
  const double st2 = model.sigma_theta() * model.sigma_theta();
  const double scale = 2.0 * sn2 * (1.0 + sn2 / st2);
  const double log_q = variant == RuleVariant::derived ? std::log1p(st2 / sn2) : std::log1p(sn2 / st2);
  return scale * (std::log(num) - std::log(den) + 0.5 * log_q);
}

}  // namespace

double threshold_start(const BghmmModel& model, RuleVariant variant) {
  require_scales(model);
  return threshold_formula(model.markov().p00(), model.markov().p10(), model, variant);
}

double threshold_end(const BghmmModel& model, RuleVariant variant) {
  require_scales(model);
  return threshold_formula(model.markov().p01(), model.markov().p11(), model, variant);
}

ThresholdPair thresholds(const BghmmModel& model, RuleVariant variant) {
  return {threshold_start(model, variant), threshold_end(model, variant), variant};
}

Vector residual_excluding(const Vector& y, const Matrix& phi, const Vector& w, std::span<const Eigen::Index> excluded) {
  if (phi.rows() != y.size() || phi.cols() != w.size()) throw InvalidArgument("residual_excluding: inconsistent shapes");
  Vector r = y - phi * w;
  for (Eigen::Index j : excluded) {
    if (j < 0 || j >= w.size()) throw InvalidArgument("residual_excluding: excluded index out of range");
    r += phi.col(j) * w[j];
  }
  return r;
}

bool start_test(const Vector& x, const Vector& phi_col, double th_start) {
  const double c = phi_col.dot(x);
  return c * c > th_start;
}

bool end_test(const Vector& z, const Vector& phi_col, double th_end, RuleVariant variant) {
  const double c = phi_col.dot(z);
  return variant == RuleVariant::derived ? c * c < th_end : c * c > th_end;
}

Support sweep_support(const Vector& y, const Matrix& phi, const Vector& w_current, const Support& s_current,
                      const BghmmModel& model, RuleVariant variant) {
  const Eigen::Index m = phi.cols();
  if (phi.rows() != y.size() || w_current.size() != m || static_cast<Eigen::Index>(s_current.size()) != m) {
    throw InvalidArgument("sweep_support: inconsistent shapes");
  }
  const ThresholdPair th = thresholds(model, variant);
  const Vector residual = y - phi * w_current;

  Support s = s_current;
  Vector z(y.size());
  Vector x(y.size());
  for (Eigen::Index j = 0; j < m; ++j) {
    z = residual + phi.col(j) * w_current[j];
    x = z;
    if (j > 0) x += phi.col(j - 1) * w_current[j - 1];

    auto& sj = s[static_cast<std::size_t>(j)];
    if (start_test(x, phi.col(j), th.th_start)) {
      sj = 1;
    } else if (end_test(z, phi.col(j), th.th_end, variant)) {
      sj = 0;
    }
  }
  return s;
}

}  // namespace bbhta
