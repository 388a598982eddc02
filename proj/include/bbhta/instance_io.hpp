#pragma once

// Plain-text instance files. Every file is a matrix:
//
//   # optional comment lines
//   <rows> <cols>
//   v00 v01 ...
//   ...
//
// Vectors are stored as <n> x 1 matrices. Values are written with 17
// significant digits so a write/read round trip is exact.

#include <filesystem>
#include <optional>

#include "bbhta/model.hpp"

namespace bbhta {

void write_matrix(const std::filesystem::path& path, const Matrix& matrix);
Matrix read_matrix(const std::filesystem::path& path);

void write_vector(const std::filesystem::path& path, const Vector& vector);
/// Accepts n x 1 and 1 x n files.
Vector read_vector(const std::filesystem::path& path);

/// Generator parameters recorded next to a synthetic instance.
struct InstanceModel {
  double p = 0.0;
  double p10 = 0.0;
  double p01 = 0.0;
  double sigma_theta = 0.0;
  double sigma_n = 0.0;
  double snr_db = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t trial_index = 0;
};

/// Directory layout: phi.txt and y.txt are required; w_gen.txt, s_gen.txt
/// and model.txt (key = value lines) are present for generated instances.
struct Instance {
  Matrix phi;
  Vector y;
  std::optional<Vector> w_gen;
  std::optional<Support> s_gen;
  std::optional<InstanceModel> model;
};

void save_instance(const std::filesystem::path& dir, const Instance& instance);
Instance load_instance(const std::filesystem::path& dir);

}  // namespace bbhta
