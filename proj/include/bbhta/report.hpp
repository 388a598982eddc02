#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bbhta/bench.hpp"

namespace bbhta {

inline constexpr const char* kRecordsHeader =
    "experiment,solver,grid_value,trial_index,nmse_db,iterations,support_f1,wall_time_ms";
inline constexpr const char* kSummaryHeader =
    "experiment,solver,grid_value,trials,mean_nmse_db,stderr_nmse_db,mean_iterations,mean_support_f1,failures,"
    "exact_recoveries";

/// Numbers use the shortest representation that parses back to the same
/// double, so parse_records_csv(records_to_csv(r)) == r.
std::string records_to_csv(std::span<const TrialRecord> records);
std::vector<TrialRecord> parse_records_csv(const std::string& text);
std::vector<TrialRecord> read_records_csv(const std::filesystem::path& path);

std::string summary_to_csv(std::span<const SummaryRow> summary);

/// Static line chart of mean NMSE against the grid value for one
/// experiment, one polyline per solver.
std::string render_svg(const std::string& experiment, std::span<const SummaryRow> summary,
                       const std::string& x_label);

/// Writes records.csv, summary.csv and <experiment>.svg for each experiment
/// into out_dir (created if missing). x_labels maps experiment name to the
/// chart's horizontal axis label; missing names fall back to "grid value".
/// Throws InvalidArgument on empty input (nothing is written) and IoError
/// with the offending path.
void emit_reports(std::span<const SummaryRow> summary, std::span<const TrialRecord> records,
                  const std::filesystem::path& out_dir, const std::map<std::string, std::string>& x_labels = {});

}  // namespace bbhta
