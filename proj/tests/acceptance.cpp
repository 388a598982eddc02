// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any selected criterion fails.
//
//   acceptance          run all criteria
//   acceptance 3 7      run only the listed ones

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "bbhta/bench.hpp"
#include "bbhta/detect.hpp"
#include "bbhta/estimate.hpp"
#include "bbhta/learn.hpp"
#include "bbhta/manifest.hpp"
#include "bbhta/metrics.hpp"
#include "bbhta/oracle.hpp"
#include "bbhta/report.hpp"
#include "bbhta/solver.hpp"
#include "bbhta/synth.hpp"
#include "test_util.hpp"

using namespace bbhta;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

Outcome oracle_equivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240601);
  const int instances = 1000;
  int compared = 0, mismatched = 0, ties = 0;
  for (int t = 0; t < instances; ++t) {
    const double sn = fixtures::log_uniform(rng, 0.01, 1.0);
    const double st = sn * fixtures::uniform(rng, 2.0, 100.0);
    const double p = fixtures::uniform(rng, 0.5, 0.99);
    const double p01 = fixtures::uniform(rng, 0.05, 0.9);
    const BghmmModel model(MarkovChainParams::from_p_p01(p, p01), st, sn);
    const auto th = thresholds(model, RuleVariant::derived);

    const Matrix phi = fixtures::random_unit_columns(8, 16, rng);
    const Support s = fixtures::random_support(16, 1.0 - p, rng);
    Vector w = fixtures::random_vector(16, rng, st);
    for (Eigen::Index j = 0; j < 16; ++j) w[j] *= s[static_cast<std::size_t>(j)];
    const Vector y = phi * w + fixtures::random_vector(8, rng, sn);
    // Decisions are taken against a perturbed iterate, as inside the solver loop.
    const Vector w_iter = w + fixtures::random_vector(16, rng, 0.05 * st);

    for (Eigen::Index j = 0; j < 16; ++j) {
      std::vector<Eigen::Index> pair = {j};
      if (j > 0) pair.push_back(j - 1);
      const auto start_scores = oracle::score_start_pair(y, phi, w_iter, j - 1, j, model);
      if (std::abs(start_scores.difference()) > 1e-9) {
        ++compared;
        const bool fast = start_test(residual_excluding(y, phi, w_iter, pair), phi.col(j), th.th_start);
        mismatched += fast != (start_scores.difference() > 0.0);
      } else {
        ++ties;
      }
      const auto end_scores = oracle::score_end_pair(y, phi, w_iter, j, model);
      if (std::abs(end_scores.difference()) > 1e-9) {
        ++compared;
        const bool fast = end_test(residual_excluding(y, phi, w_iter, std::vector<Eigen::Index>{j}), phi.col(j),
                                   th.th_end, RuleVariant::derived);
        mismatched += fast != (end_scores.difference() > 0.0);
      } else {
        ++ties;
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {mismatched == 0 && elapsed < 30.0,
          fmt("%d instances, %d decisions compared, %d mismatches, %d ties, %.2f s (limit 30 s)", instances, compared,
              mismatched, ties, elapsed)};
}

Outcome lmmse_equivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(77);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const auto n = std::uniform_int_distribution<Eigen::Index>(4, 16)(rng);
    const auto m = std::uniform_int_distribution<Eigen::Index>(n, 32)(rng);
    const Matrix phi = fixtures::random_unit_columns(n, m, rng);
    const Support s = fixtures::random_support(m, fixtures::uniform(rng, 0.1, 0.9), rng);
    const Vector y = fixtures::random_vector(n, rng);
    const double sn = fixtures::log_uniform(rng, 0.05, 1.0);
    const double st = fixtures::log_uniform(rng, 0.5, 3.0);

    Matrix sdiag = Matrix::Zero(m, m);
    for (Eigen::Index j = 0; j < m; ++j) sdiag(j, j) = s[static_cast<std::size_t>(j)];
    const Matrix cov = sn * sn * Matrix::Identity(n, n) + st * st * phi * sdiag * phi.transpose();
    const Vector dense = st * st * sdiag * phi.transpose() * cov.fullPivLu().solve(y);
    const Vector fast = lmmse_amplitudes(y, phi, s, sn, st).theta;
    const double denom = dense.norm();
    const double err = denom > 0.0 ? (fast - dense).norm() / denom : fast.norm();
    worst = std::max(worst, err);
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-8 && elapsed < 10.0,
          fmt("200 instances, worst relative error %.3g (limit 1e-8), %.2f s (limit 10 s)", worst, elapsed)};
}

Outcome generator_statistics() {
  const auto mc = MarkovChainParams::from_p_p01(0.9, 0.09);
  std::size_t zeros = 0, total = 0, runs = 0, run_samples = 0;
  for (std::uint64_t c = 0; c < 400; ++c) {
    const Support s = sample_support(mc, 512, {3, c});
    for (std::size_t i = 0; i < s.size(); ++i) {
      ++total;
      if (!s[i]) {
        ++zeros;
        continue;
      }
      ++run_samples;
      if (i == 0 || !s[i - 1]) ++runs;
    }
  }
  const double zero_fraction = static_cast<double>(zeros) / static_cast<double>(total);
  const double mean_run = runs ? static_cast<double>(run_samples) / static_cast<double>(runs) : 0.0;
  const double target_run = 1.0 / 0.09;
  const bool ok = std::abs(zero_fraction - 0.9) <= 0.02 && std::abs(mean_run - target_run) <= 0.15 * target_run;
  return {ok, fmt("zero fraction %.4f (0.9 +/- 0.02), mean active run %.3f (%.2f +/- 15%%), %zu runs", zero_fraction,
                  mean_run, target_run, runs)};
}

std::vector<SummaryRow> snr_sweep(std::vector<double> grid, std::vector<SolverKind> solvers) {
  ExperimentManifest mf = nmse_vs_snr_manifest(50, 1);
  mf.snr_grid_db = std::move(grid);
  mf.solvers = std::move(solvers);
  return aggregate(run_experiment(mf, workers()).records);
}

Outcome structure_gap() {
  const auto start = Clock::now();
  const auto summary = snr_sweep({10, 15, 20, 25, 30}, {SolverKind::block_bhta, SolverKind::bpa_iid});
  const double gap = mean_gap_db(summary, "block-bhta", "bpa-iid");
  std::string points;
  for (std::size_t i = 0; i + 1 < summary.size(); i += 2) {
    points += fmt(" %g dB: %.2f vs %.2f;", summary[i].grid_value, summary[i].mean_nmse_db, summary[i + 1].mean_nmse_db);
  }
  return {gap <= -3.0, fmt("mean gap block-bhta - bpa-iid = %.2f dB (limit -3 dB), %.1f s;", gap, seconds_since(start)) +
                           points};
}

Outcome oracle_support_sanity() {
  TrialSpec spec;
  spec.n = 192;
  spec.m = 512;
  spec.snr_db = 60.0;
  double sum = 0.0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    const auto trial = generate_trial(spec, {60, t});
    const BghmmModel model(spec.markov, spec.sigma_theta, trial.measurement.sigma_n);
    const auto out = run_oracle_support_lmmse(trial.measurement.y, trial.phi, trial.signal.s(), model);
    sum += nmse_db(out.w_hat, trial.signal.w());
  }
  const double mean = sum / 20.0;
  return {mean <= -40.0, fmt("20 trials at 60 dB, mean NMSE %.2f dB (limit -40 dB)", mean)};
}

Outcome snr_monotonicity() {
  const auto summary = snr_sweep({10, 20, 30}, {SolverKind::block_bhta});
  bool ok = summary.size() == 3;
  for (std::size_t i = 1; ok && i < summary.size(); ++i) ok = summary[i].mean_nmse_db < summary[i - 1].mean_nmse_db;
  return {ok, fmt("block-bhta mean NMSE at 10/20/30 dB: %.2f / %.2f / %.2f", summary.at(0).mean_nmse_db,
                  summary.at(1).mean_nmse_db, summary.at(2).mean_nmse_db)};
}

Outcome learn_worked_values() {
  const auto est = update_markov(Support{0, 1, 1, 0, 1}, {0.9, 0.01, 0.09});
  const double st = update_theta_sigma(Vector::Ones(256), 256, 512, 0.9);
  const double sn = update_noise_sigma((Vector(2) << 3.0, 4.0).finished(), Matrix::Identity(2, 2), Vector::Zero(2), 1.0);
  const bool ok = est.p == 0.4 && est.p10 == 1.0 - kProbabilityFloor && est.p01 == 0.5 &&
                  std::abs(st - std::sqrt(5.0)) <= 1e-15 && std::abs(sn - 5.0 / std::sqrt(2.0)) <= 1e-15;
  return {ok, fmt("p=%.17g p10=%.17g p01=%.17g sigma_theta=%.17g sigma_n=%.17g", est.p, est.p10, est.p01, st, sn)};
}

Outcome determinism() {
  const auto start = Clock::now();
  const auto mf = load_manifest(BBHTA_SOURCE_DIR "/manifests/nmse_vs_snr.yaml");
  const std::string a = records_to_csv(run_experiment(mf, workers()).records);
  const std::string b = records_to_csv(run_experiment(mf, std::max(2u, workers() + 1)).records);
  return {a == b && !a.empty(), fmt("%d trials x %zu SNR points twice, records.csv %zu bytes, %s, %.1f s", mf.trials,
                                    mf.snr_grid_db.size(), a.size(), a == b ? "identical" : "DIFFERENT",
                                    seconds_since(start))};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"oracle equivalence of start/end decisions", oracle_equivalence},
      {"LMMSE matches dense assembly", lmmse_equivalence},
      {"generator support statistics", generator_statistics},
      {"block structure gap over memoryless baseline", structure_gap},
      {"oracle-support LMMSE at 60 dB", oracle_support_sanity},
      {"NMSE decreases with SNR", snr_monotonicity},
      {"hyperparameter update worked values", learn_worked_values},
      {"byte-identical records.csv across runs", determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failures += !outcome.pass;
    std::printf("%s criterion %d (%s): %s\n", outcome.pass ? "PASS" : "FAIL", id, criteria[i].first,
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
