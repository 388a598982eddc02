#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bbhta/model.hpp"
#include "bbhta/solver.hpp"

namespace bbhta {

inline constexpr const char* kManifestFormat = "bbhta-manifest/1";

enum class GridKind { snr_db, p01 };

/// One Monte-Carlo experiment. Exactly one of snr_grid_db / p01_grid is
/// non-empty; a p01 sweep runs at the fixed snr_db.
struct ExperimentManifest {
  std::string name;
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  double p = 0.9;
  double p01 = 0.09;
  double sigma_theta = 1.0;
  std::vector<double> snr_grid_db;
  std::vector<double> p01_grid;
  double snr_db = 15.0;
  int trials = 1;
  std::uint64_t base_seed = 0;
  std::vector<SolverKind> solvers;
  SolverConfig solver_config;
  /// Wall-clock columns are written as 0 unless enabled, which keeps
  /// records.csv byte-identical across runs.
  bool record_timing = false;

  GridKind grid_kind() const { return p01_grid.empty() ? GridKind::snr_db : GridKind::p01; }
  const std::vector<double>& grid() const { return p01_grid.empty() ? snr_grid_db : p01_grid; }
  std::string grid_label() const { return grid_kind() == GridKind::snr_db ? "SNR (dB)" : "p01"; }

  /// Throws InvalidArgument describing the first violated constraint.
  void validate() const;
};

ExperimentManifest parse_manifest(const std::string& text);
ExperimentManifest load_manifest(const std::filesystem::path& path);
std::string to_yaml(const ExperimentManifest& manifest);

/// NMSE versus SNR: N = 192, M = 512, p = 0.9, p01 = 0.09, sigma_theta = 1,
/// SNR in {10, 15, 20, 25, 30} dB, Block-BHTA against the memoryless baseline.
ExperimentManifest nmse_vs_snr_manifest(int trials = 400, std::uint64_t base_seed = 1);

/// NMSE versus p01: N = 256, M = 512, SNR 15 dB, ten p01 values 0.09 .. 0.9.
ExperimentManifest nmse_vs_p01_manifest(int trials = 400, std::uint64_t base_seed = 2);

}  // namespace bbhta
