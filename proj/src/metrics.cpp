#include "bbhta/metrics.hpp"

#include <cmath>

namespace bbhta {

double nmse_db(const Vector& w_hat, const Vector& w_gen) {
  if (w_hat.size() != w_gen.size()) throw InvalidArgument("nmse_db: length mismatch");
  const double reference = w_gen.squaredNorm();
  if (reference == 0.0) throw InvalidArgument("nmse_db: reference signal is zero");
  const double error = (w_hat - w_gen).squaredNorm();
  if (error == 0.0) return kExactRecoveryNmseDb;
  return 10.0 * std::log10(error / reference);
}

double snr_db(const Vector& clean, const Vector& noise) {
  return 20.0 * std::log10(clean.norm() / noise.norm());
}

double support_f1(std::span<const std::uint8_t> s_hat, std::span<const std::uint8_t> s_true) {
  if (s_hat.size() != s_true.size()) throw InvalidArgument("support_f1: length mismatch");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < s_hat.size(); ++i) {
    const bool a = s_hat[i] != 0;
    const bool b = s_true[i] != 0;
    tp += a && b;
    fp += a && !b;
    fn += !a && b;
  }
  if (tp + fp + fn == 0) return 1.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

}  // namespace bbhta
