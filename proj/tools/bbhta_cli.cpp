// Command-line front end. Talks to the library only through the C API.
//
//   bbhta gen    --out DIR [--seed S] [--n N] [--m M] [--p P] [--p01 Q] [--snr DB]
//   bbhta solve  --instance DIR [--solver block-bhta|bpa-iid|oracle-lmmse] [--out DIR]
//   bbhta bench  --manifest FILE --out DIR [--workers K] [--trials T] [--seed S]
//   bbhta report --records FILE --out DIR
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "bbhta/bbhta.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;

int report_failure(const char* what, bbhta_status status) {
  std::fprintf(stderr, "bbhta: %s failed (%s): %s\n", what, bbhta_status_string(status), bbhta_last_error());
  return kExitFailure;
}

void print_summary(const bbhta_summary* summary) {
  std::printf("%-16s %-14s %10s %7s %12s %9s %8s %6s %5s\n", "experiment", "solver", "grid", "trials", "nmse_db",
              "stderr", "iters", "f1", "fail");
  const size_t rows = bbhta_summary_row_count(summary);
  for (size_t i = 0; i < rows; ++i) {
    bbhta_summary_row r;
    if (bbhta_summary_row_get(summary, i, &r) != BBHTA_OK) continue;
    std::printf("%-16s %-14s %10g %7zu %12.4f %9.4f %8.2f %6.3f %5zu\n", r.experiment, r.solver, r.grid_value,
                r.trials, r.mean_nmse_db, r.stderr_nmse_db, r.mean_iterations, r.mean_support_f1, r.failures);
  }
}

struct GenArgs {
  std::string out;
  bbhta_gen_params params{};
};

struct SolveArgs {
  std::string instance;
  std::string out;
  std::string solver = "block-bhta";
  std::string variant = "derived";
  bbhta_solver_config config{};
  bool fixed_params = false;
};

struct BenchArgs {
  std::string manifest;
  std::string out;
  unsigned workers = 0;
  int trials = 0;
  std::optional<std::uint64_t> seed;
  std::string variant;
};

struct ReportArgs {
  std::string records;
  std::string out;
  std::string x_label = "grid value";
};

int run_gen(const GenArgs& args) {
  bbhta_instance* instance = nullptr;
  if (auto st = bbhta_instance_generate(&args.params, &instance); st != BBHTA_OK) return report_failure("gen", st);
  const auto st = bbhta_instance_save(instance, args.out.c_str());
  bbhta_instance_free(instance);
  if (st != BBHTA_OK) return report_failure("gen", st);
  std::printf("wrote %zux%zu instance to %s\n", args.params.n, args.params.m, args.out.c_str());
  return 0;
}

int run_solve(SolveArgs args) {
  static const std::map<std::string, bbhta_solver_kind> kinds = {
      {"block-bhta", BBHTA_SOLVER_BLOCK_BHTA},
      {"bpa-iid", BBHTA_SOLVER_BPA_IID},
      {"oracle-lmmse", BBHTA_SOLVER_ORACLE_LMMSE}};
  args.config.variant = args.variant == "printed" ? BBHTA_VARIANT_PRINTED : BBHTA_VARIANT_DERIVED;
  args.config.learn_params = args.fixed_params ? 0 : 1;

  bbhta_instance* instance = nullptr;
  if (auto st = bbhta_instance_load(args.instance.c_str(), &instance); st != BBHTA_OK) {
    return report_failure("loading instance", st);
  }
  bbhta_result* result = nullptr;
  if (auto st = bbhta_solve(instance, kinds.at(args.solver), &args.config, &result); st != BBHTA_OK) {
    bbhta_instance_free(instance);
    return report_failure("solve", st);
  }

  int code = 0;
  bbhta_result_info info;
  bbhta_result_info_get(result, &info);
  for (size_t i = 0; i < info.warning_count; ++i) std::fprintf(stderr, "warning: %s\n", bbhta_result_warning(result, i));
  std::printf("solver: %s\niterations: %d\nfinal_difference: %.6g\nsupport_size: %zu\n", args.solver.c_str(),
              info.iterations, info.final_difference, info.support_size);
  std::printf("sigma_n: %.6g\nsigma_theta: %.6g\np: %.6g\np10: %.6g\np01: %.6g\n", info.sigma_n, info.sigma_theta,
              info.p, info.p10, info.p01);
  if (bbhta_instance_has_truth(instance)) {
    double nmse = 0.0;
    if (bbhta_result_nmse_db(result, instance, &nmse) == BBHTA_OK) std::printf("nmse_db: %.4f\n", nmse);
  }
  if (!args.out.empty()) {
    if (auto st = bbhta_result_save(result, args.out.c_str()); st != BBHTA_OK) code = report_failure("saving result", st);
  }
  bbhta_result_free(result);
  bbhta_instance_free(instance);
  return code;
}

int run_bench(const BenchArgs& args) {
  bbhta_bench_options options{};
  options.manifest_path = args.manifest.c_str();
  options.out_dir = args.out.c_str();
  options.workers = args.workers > 0 ? args.workers : std::max(1u, std::thread::hardware_concurrency());
  options.trials_override = args.trials;
  options.variant_override = args.variant.empty() ? -1
                             : args.variant == "printed" ? BBHTA_VARIANT_PRINTED
                                                       : BBHTA_VARIANT_DERIVED;
  options.has_seed_override = args.seed.has_value() ? 1 : 0;
  options.seed_override = args.seed.value_or(0);

  bbhta_summary* summary = nullptr;
  if (auto st = bbhta_bench_run(&options, &summary); st != BBHTA_OK) return report_failure("bench", st);
  print_summary(summary);
  if (const int redrawn = bbhta_summary_resampled_signals(summary); redrawn > 0) {
    std::fprintf(stderr, "note: %d all-zero signals were discarded and redrawn\n", redrawn);
  }
  const size_t failures = bbhta_summary_failure_count(summary);
  for (size_t i = 0; i < failures; ++i) std::fprintf(stderr, "solver failure: %s\n", bbhta_summary_failure(summary, i));
  bbhta_summary_free(summary);
  std::printf("reports written to %s\n", args.out.c_str());
  return 0;
}

int run_report(const ReportArgs& args) {
  bbhta_summary* summary = nullptr;
  if (auto st = bbhta_report(args.records.c_str(), args.out.c_str(), args.x_label.c_str(), &summary); st != BBHTA_OK) {
    return report_failure("report", st);
  }
  print_summary(summary);
  bbhta_summary_free(summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-sparse signal recovery by Bayesian hypothesis testing"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(bbhta_version()));
  const std::vector<std::string> variants = {"derived", "printed"};

  GenArgs gen;
  bbhta_gen_params_default(&gen.params);
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic instance");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--seed", gen.params.seed, "Base seed");
  gen_cmd->add_option("--trial", gen.params.trial_index, "Trial index within the seed");
  gen_cmd->add_option("--n", gen.params.n, "Measurements N")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--m", gen.params.m, "Signal length M")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--p", gen.params.p, "Steady-state inactive probability")->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--p01", gen.params.p01, "Active-to-inactive transition probability")->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--sigma-theta", gen.params.sigma_theta, "Amplitude standard deviation")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--snr", gen.params.snr_db, "Target SNR in dB");

  SolveArgs solve;
  bbhta_solver_config_default(&solve.config);
  auto* solve_cmd = app.add_subcommand("solve", "Run one solver on an instance directory");
  solve_cmd->add_option("--instance", solve.instance, "Instance directory (phi.txt, y.txt)")->required();
  solve_cmd->add_option("--out", solve.out, "Directory for w_hat.txt and s_hat.txt");
  solve_cmd->add_option("--solver", solve.solver, "Solver")->check(CLI::IsMember({"block-bhta", "bpa-iid", "oracle-lmmse"}));
  solve_cmd->add_option("--variant", solve.variant, "Threshold variant")->check(CLI::IsMember(variants));
  solve_cmd->add_option("--k-max", solve.config.k_max, "Iteration cap")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--epsilon", solve.config.epsilon, "Relative-change tolerance")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--p-init", solve.config.p_init, "Initial p in [0.5, 1]")->check(CLI::Range(0.5, 1.0));
  solve_cmd->add_option("--p01-init", solve.config.p01_init, "Initial p01 in (0, 1)");
  solve_cmd->add_flag("--fixed-params", solve.fixed_params, "Keep hyperparameters at their initial values");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run an experiment manifest");
  bench_cmd->add_option("--manifest", bench.manifest, "Manifest file (YAML)")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--out", bench.out, "Output directory")->required();
  bench_cmd->add_option("--workers", bench.workers, "Worker threads (default: hardware concurrency)");
  bench_cmd->add_option("--trials", bench.trials, "Override the manifest trial count")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench.seed, "Override the manifest base seed");
  bench_cmd->add_option("--variant", bench.variant, "Override the threshold variant")->check(CLI::IsMember(variants));

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Re-aggregate an existing records.csv");
  report_cmd->add_option("--records", report.records, "records.csv to read")->required()->check(CLI::ExistingFile);
  report_cmd->add_option("--out", report.out, "Output directory")->required();
  report_cmd->add_option("--x-label", report.x_label, "Horizontal axis label for the charts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (gen_cmd->parsed()) return run_gen(gen);
  if (solve_cmd->parsed()) return run_solve(solve);
  if (bench_cmd->parsed()) return run_bench(bench);
  if (report_cmd->parsed()) return run_report(report);
  return kExitUsage;
}
