#pragma once

// Monte-Carlo execution of an experiment manifest and aggregation of the
// per-trial records.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bbhta/manifest.hpp"

namespace bbhta {

struct TrialRecord {
  std::string experiment;
  std::string solver;
  double grid_value = 0.0;
  std::uint64_t trial_index = 0;
  /// NaN marks a trial where the solver threw.
  double nmse_db = 0.0;
  int iterations = 0;
  double support_f1 = 0.0;
  double wall_time_ms = 0.0;

  bool failed() const;
  bool operator==(const TrialRecord&) const = default;
};

struct ExperimentRun {
  /// Canonical order: grid point, then solver (manifest order), then trial.
  std::vector<TrialRecord> records;
  /// All-zero signals discarded and redrawn by the generator.
  int resampled_signals = 0;
  /// One line per failed solver run.
  std::vector<std::string> failures;
};

/// Runs every (grid point, trial) on `workers` threads. All solvers of a
/// (grid point, trial) pair see the same phi, w_gen and y. Output does not
/// depend on the worker count.
ExperimentRun run_experiment(const ExperimentManifest& manifest, unsigned workers = 1);

struct SummaryRow {
  std::string experiment;
  std::string solver;
  double grid_value = 0.0;
  std::size_t trials = 0;
  double mean_nmse_db = 0.0;
  /// Standard error of the mean NMSE (sample standard deviation / sqrt(n)).
  double stderr_nmse_db = 0.0;
  double mean_iterations = 0.0;
  double mean_support_f1 = 0.0;
  std::size_t failures = 0;
  /// Records carrying the exact-recovery sentinel; included in the mean.
  std::size_t exact_recoveries = 0;
};

/// Groups by (experiment, solver, grid value) in order of first appearance.
/// Failed records are counted but excluded from the means.
std::vector<SummaryRow> aggregate(std::span<const TrialRecord> records);

/// Mean NMSE difference (a - b) over grid points where both solvers have rows.
double mean_gap_db(std::span<const SummaryRow> summary, const std::string& solver_a, const std::string& solver_b);

}  // namespace bbhta
