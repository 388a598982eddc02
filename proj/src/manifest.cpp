#include "bbhta/manifest.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "text_format.hpp"

namespace bbhta {

namespace {

template <typename T>
T required(const YAML::Node& node, const char* key) {
  const YAML::Node child = node[key];
  if (!child) throw InvalidArgument(std::string("manifest: missing key '") + key + "'");
  try {
    return child.as<T>();
  } catch (const YAML::Exception& e) {
    throw InvalidArgument(std::string("manifest: bad value for '") + key + "': " + e.what());
  }
}

template <typename T>
T optional(const YAML::Node& node, const char* key, T fallback) {
  const YAML::Node child = node[key];
  if (!child) return fallback;
  try {
    return child.as<T>();
  } catch (const YAML::Exception& e) {
    throw InvalidArgument(std::string("manifest: bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

void ExperimentManifest::validate() const {
  if (name.empty()) throw InvalidArgument("manifest: name must be non-empty");
  if (name.find_first_of(",\"\n/\\") != std::string::npos) {
    throw InvalidArgument("manifest: name must not contain commas, quotes, slashes or newlines");
  }
  if (n < 1 || m < 1) throw InvalidArgument("manifest: N and M must be positive");
  if (snr_grid_db.empty() == p01_grid.empty()) {
    throw InvalidArgument("manifest: exactly one of snr_grid_db and p01_grid must be non-empty");
  }
  if (trials < 1) throw InvalidArgument("manifest: trials must be at least 1");
  if (solvers.empty()) throw InvalidArgument("manifest: at least one solver is required");
  if (!(sigma_theta > 0.0)) throw InvalidArgument("manifest: sigma_theta must be positive");
  for (double v : snr_grid_db) {
    if (!std::isfinite(v)) throw InvalidArgument("manifest: SNR grid values must be finite");
  }
  if (!std::isfinite(snr_db)) throw InvalidArgument("manifest: snr_db must be finite");
  if (p01_grid.empty()) {
    MarkovChainParams::from_p_p01(p, p01);
  } else {
    for (double v : p01_grid) MarkovChainParams::from_p_p01(p, v);
  }
  solver_config.validate();
}

ExperimentManifest parse_manifest(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw InvalidArgument(std::string("manifest: YAML parse error: ") + e.what());
  }
  if (!root.IsMap()) throw InvalidArgument("manifest: top level must be a mapping");
  const auto format = required<std::string>(root, "format");
  if (format != kManifestFormat) {
    throw InvalidArgument("manifest: unsupported format '" + format + "' (expected " + kManifestFormat + ")");
  }

  ExperimentManifest mf;
  mf.name = required<std::string>(root, "name");
  mf.n = required<Eigen::Index>(root, "N");
  mf.m = required<Eigen::Index>(root, "M");

  const YAML::Node model = root["model"];
  if (!model || !model.IsMap()) throw InvalidArgument("manifest: missing 'model' section");
  mf.p = required<double>(model, "p");
  mf.p01 = optional<double>(model, "p01", mf.p01);
  mf.sigma_theta = required<double>(model, "sigma_theta");

  mf.snr_grid_db = optional<std::vector<double>>(root, "snr_grid_db", {});
  mf.p01_grid = optional<std::vector<double>>(root, "p01_grid", {});
  mf.snr_db = optional<double>(root, "snr_db", mf.snr_db);
  mf.trials = required<int>(root, "trials");
  mf.base_seed = required<std::uint64_t>(root, "base_seed");
  for (const auto& id : required<std::vector<std::string>>(root, "solvers")) {
    mf.solvers.push_back(parse_solver_kind(id));
  }
  mf.record_timing = optional<bool>(root, "record_timing", false);

  if (const YAML::Node cfg = root["solver_config"]) {
    if (!cfg.IsMap()) throw InvalidArgument("manifest: 'solver_config' must be a mapping");
    auto& sc = mf.solver_config;
    sc.k_max = optional<int>(cfg, "k_max", sc.k_max);
    sc.epsilon = optional<double>(cfg, "epsilon", sc.epsilon);
    sc.p_init = optional<double>(cfg, "p_init", sc.p_init);
    sc.p01_init = optional<double>(cfg, "p01_init", sc.p01_init);
    sc.rule_variant = parse_rule_variant(optional<std::string>(cfg, "variant", to_string(sc.rule_variant)));
    sc.learn_params = optional<bool>(cfg, "learn_params", sc.learn_params);
  }
  mf.validate();
  return mf;
}

ExperimentManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_manifest(buf.str());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

std::string to_yaml(const ExperimentManifest& mf) {
  auto list = [](const std::vector<double>& values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out += ", ";
      out += detail::format_double(values[i]);
    }
    return out + "]";
  };
  std::ostringstream out;
  out << "format: " << kManifestFormat << '\n'
      << "name: " << mf.name << '\n'
      << "N: " << mf.n << '\n'
      << "M: " << mf.m << '\n'
      << "model:\n"
      << "  p: " << detail::format_double(mf.p) << '\n'
      << "  p01: " << detail::format_double(mf.p01) << '\n'
      << "  sigma_theta: " << detail::format_double(mf.sigma_theta) << '\n';
  if (mf.grid_kind() == GridKind::snr_db) {
    out << "snr_grid_db: " << list(mf.snr_grid_db) << '\n';
  } else {
    out << "p01_grid: " << list(mf.p01_grid) << '\n' << "snr_db: " << detail::format_double(mf.snr_db) << '\n';
  }
  out << "trials: " << mf.trials << '\n' << "base_seed: " << mf.base_seed << '\n' << "solvers: [";
  for (std::size_t i = 0; i < mf.solvers.size(); ++i) out << (i ? ", " : "") << to_string(mf.solvers[i]);
  const auto& sc = mf.solver_config;
  out << "]\n"
      << "solver_config:\n"
      << "  k_max: " << sc.k_max << '\n'
      << "  epsilon: " << detail::format_double(sc.epsilon) << '\n'
      << "  p_init: " << detail::format_double(sc.p_init) << '\n'
      << "  p01_init: " << detail::format_double(sc.p01_init) << '\n'
      << "  variant: " << to_string(sc.rule_variant) << '\n'
      << "  learn_params: " << (sc.learn_params ? "true" : "false") << '\n'
      << "record_timing: " << (mf.record_timing ? "true" : "false") << '\n';
  return out.str();
}

ExperimentManifest nmse_vs_snr_manifest(int trials, std::uint64_t base_seed) {
  ExperimentManifest mf;
  mf.name = "nmse-vs-snr";
  mf.n = 192;
  mf.m = 512;
  mf.p = 0.9;
  mf.p01 = 0.09;
  mf.sigma_theta = 1.0;
  mf.snr_grid_db = {10, 15, 20, 25, 30};
  mf.trials = trials;
  mf.base_seed = base_seed;
  mf.solvers = {SolverKind::block_bhta, SolverKind::bpa_iid};
  return mf;
}

ExperimentManifest nmse_vs_p01_manifest(int trials, std::uint64_t base_seed) {
  ExperimentManifest mf;
  mf.name = "nmse-vs-p01";
  mf.n = 256;
  mf.m = 512;
  mf.p = 0.9;
  mf.p01 = 0.09;
  mf.sigma_theta = 1.0;
  mf.p01_grid = {0.09, 0.18, 0.27, 0.36, 0.45, 0.54, 0.63, 0.72, 0.81, 0.9};
  mf.snr_db = 15.0;
  mf.trials = trials;
  mf.base_seed = base_seed;
  mf.solvers = {SolverKind::block_bhta, SolverKind::bpa_iid, SolverKind::oracle_lmmse};
  return mf;
}

}  // namespace bbhta
