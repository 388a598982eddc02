#include "bbhta/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "bbhta/metrics.hpp"
#include "bbhta/synth.hpp"

namespace bbhta {

bool TrialRecord::failed() const { return std::isnan(nmse_db); }

namespace {

struct TrialOutcome {
  std::vector<TrialRecord> per_solver;
  int resamples = 0;
  std::vector<std::string> failures;
};

TrialSpec spec_for(const ExperimentManifest& mf, double grid_value) {
  TrialSpec spec;
  spec.n = mf.n;
  spec.m = mf.m;
  spec.sigma_theta = mf.sigma_theta;
  if (mf.grid_kind() == GridKind::snr_db) {
    spec.markov = MarkovChainParams::from_p_p01(mf.p, mf.p01);
    spec.snr_db = grid_value;
  } else {
    spec.markov = MarkovChainParams::from_p_p01(mf.p, grid_value);
    spec.snr_db = mf.snr_db;
  }
  return spec;
}

SolverOutput run_solver(SolverKind kind, const SyntheticTrial& trial, const TrialSpec& spec,
                        const SolverConfig& config) {
  const Vector& y = trial.measurement.y;
  switch (kind) {
    case SolverKind::block_bhta: return run_block_bhta(y, trial.phi, config);
    case SolverKind::bpa_iid: return run_bpa_baseline(y, trial.phi, config);
    case SolverKind::oracle_lmmse:
      return run_oracle_support_lmmse(y, trial.phi, trial.signal.s(),
                                      BghmmModel(spec.markov, spec.sigma_theta, trial.measurement.sigma_n));
  }
  throw InvalidArgument("unknown solver kind");
}

TrialOutcome run_trial(const ExperimentManifest& mf, double grid_value, std::uint64_t trial_index) {
  TrialOutcome outcome;
  const TrialSpec spec = spec_for(mf, grid_value);
  const SyntheticTrial trial = generate_trial(spec, TrialSeed{mf.base_seed, trial_index});
  outcome.resamples = trial.resamples;

  for (SolverKind kind : mf.solvers) {
    TrialRecord rec;
    rec.experiment = mf.name;
    rec.solver = to_string(kind);
    rec.grid_value = grid_value;
    rec.trial_index = trial_index;
    const auto start = std::chrono::steady_clock::now();
    try {
      const SolverOutput out = run_solver(kind, trial, spec, mf.solver_config);
      rec.nmse_db = nmse_db(out.w_hat, trial.signal.w());
      rec.iterations = out.iterations;
      rec.support_f1 = support_f1(out.s_hat, trial.signal.s());
    } catch (const std::exception& e) {
      rec.nmse_db = std::numeric_limits<double>::quiet_NaN();
      rec.iterations = 0;
      rec.support_f1 = 0.0;
      outcome.failures.push_back(rec.solver + " at grid " + std::to_string(grid_value) + ", trial " +
                                 std::to_string(trial_index) + ": " + e.what());
    }
    if (mf.record_timing) {
      rec.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    outcome.per_solver.push_back(std::move(rec));
  }
  return outcome;
}

}  // namespace

ExperimentRun run_experiment(const ExperimentManifest& mf, unsigned workers) {
  mf.validate();
  const auto& grid = mf.grid();
  const std::size_t trials = static_cast<std::size_t>(mf.trials);
  const std::size_t tasks = grid.size() * trials;
  std::vector<TrialOutcome> outcomes(tasks);

  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mutex;
  auto work = [&] {
    for (std::size_t t = next++; t < tasks; t = next++) {
      try {
        outcomes[t] = run_trial(mf, grid[t / trials], t % trials);
      } catch (...) {
        std::lock_guard lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
      }
    }
  };

  const unsigned count = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(tasks)));
  if (count == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (unsigned i = 0; i < count; ++i) pool.emplace_back(work);
  }
  if (fatal) std::rethrow_exception(fatal);

  ExperimentRun run;
  run.records.reserve(tasks * mf.solvers.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (std::size_t k = 0; k < mf.solvers.size(); ++k) {
      for (std::size_t t = 0; t < trials; ++t) run.records.push_back(outcomes[g * trials + t].per_solver[k]);
    }
    for (std::size_t t = 0; t < trials; ++t) {
      const auto& o = outcomes[g * trials + t];
      run.resampled_signals += o.resamples;
      run.failures.insert(run.failures.end(), o.failures.begin(), o.failures.end());
    }
  }
  return run;
}

std::vector<SummaryRow> aggregate(std::span<const TrialRecord> records) {
  if (records.empty()) throw InvalidArgument("aggregate: no records");

  struct Accumulator {
    SummaryRow row;
    std::vector<double> nmse;
    double iterations = 0.0;
    double f1 = 0.0;
  };
  std::vector<Accumulator> groups;
  std::map<std::tuple<std::string, std::string, double>, std::size_t> index;

  for (const auto& rec : records) {
    const auto key = std::make_tuple(rec.experiment, rec.solver, rec.grid_value);
    auto [it, inserted] = index.try_emplace(key, groups.size());
    if (inserted) {
      groups.push_back({});
      groups.back().row.experiment = rec.experiment;
      groups.back().row.solver = rec.solver;
      groups.back().row.grid_value = rec.grid_value;
    }
    auto& acc = groups[it->second];
    ++acc.row.trials;
    if (rec.failed()) {
      ++acc.row.failures;
      continue;
    }
    if (rec.nmse_db == kExactRecoveryNmseDb) ++acc.row.exact_recoveries;
    acc.nmse.push_back(rec.nmse_db);
    acc.iterations += rec.iterations;
    acc.f1 += rec.support_f1;
  }

  std::vector<SummaryRow> out;
  out.reserve(groups.size());
  for (auto& acc : groups) {
    SummaryRow row = acc.row;
    const auto n = static_cast<double>(acc.nmse.size());
    if (acc.nmse.empty()) {
      row.mean_nmse_db = std::numeric_limits<double>::quiet_NaN();
      row.mean_iterations = std::numeric_limits<double>::quiet_NaN();
      row.mean_support_f1 = std::numeric_limits<double>::quiet_NaN();
    } else {
      double sum = 0.0;
      for (double v : acc.nmse) sum += v;
      row.mean_nmse_db = sum / n;
      double ss = 0.0;
      for (double v : acc.nmse) ss += (v - row.mean_nmse_db) * (v - row.mean_nmse_db);
      row.stderr_nmse_db = acc.nmse.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
      row.mean_iterations = acc.iterations / n;
      row.mean_support_f1 = acc.f1 / n;
    }
    out.push_back(std::move(row));
  }
  return out;
}

double mean_gap_db(std::span<const SummaryRow> summary, const std::string& solver_a, const std::string& solver_b) {
  std::map<std::pair<std::string, double>, double> b_rows;
  for (const auto& row : summary) {
    if (row.solver == solver_b) b_rows[{row.experiment, row.grid_value}] = row.mean_nmse_db;
  }
  double sum = 0.0;
  int count = 0;
  for (const auto& row : summary) {
    if (row.solver != solver_a) continue;
    const auto it = b_rows.find({row.experiment, row.grid_value});
    if (it == b_rows.end()) continue;
    sum += row.mean_nmse_db - it->second;
    ++count;
  }
  if (count == 0) throw InvalidArgument("mean_gap_db: no common grid points for " + solver_a + " and " + solver_b);
  return sum / count;
}

}  // namespace bbhta
