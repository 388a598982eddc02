#include "bbhta/bbhta.h"

#include <exception>
#include <filesystem>
#include <map>
#include <memory>
#include <new>
#include <string>

#include "bbhta/bench.hpp"
#include "bbhta/instance_io.hpp"
#include "bbhta/manifest.hpp"
#include "bbhta/metrics.hpp"
#include "bbhta/report.hpp"
#include "bbhta/solver.hpp"
#include "bbhta/synth.hpp"

struct bbhta_instance {
  bbhta::Instance data;
};

struct bbhta_result {
  bbhta::SolverOutput output;
};

struct bbhta_summary {
  std::vector<bbhta::SummaryRow> rows;
  int resampled_signals = 0;
  std::vector<std::string> failures;
};

namespace {

thread_local std::string last_error;

bbhta_status fail(bbhta_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Maps the exception hierarchy onto status codes.
template <typename F>
bbhta_status guarded(F&& body) {
  try {
    body();
    return BBHTA_OK;
  } catch (const bbhta::InvalidArgument& e) {
    return fail(BBHTA_ERR_INVALID_ARGUMENT, e.what());
  } catch (const bbhta::NumericalError& e) {
    return fail(BBHTA_ERR_NUMERICAL, e.what());
  } catch (const bbhta::IoError& e) {
    return fail(BBHTA_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(BBHTA_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BBHTA_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(BBHTA_ERR_INTERNAL, "unknown error");
  }
}

void require(bool condition, const char* message) {
  if (!condition) throw bbhta::InvalidArgument(message);
}

bbhta::SolverConfig to_config(const bbhta_solver_config* c) {
  bbhta::SolverConfig config;
  if (c == nullptr) return config;
  config.k_max = c->k_max;
  config.epsilon = c->epsilon;
  config.p_init = c->p_init;
  config.p01_init = c->p01_init;
  require(c->variant == BBHTA_VARIANT_DERIVED || c->variant == BBHTA_VARIANT_PRINTED, "unknown rule variant");
  config.rule_variant = c->variant == BBHTA_VARIANT_DERIVED ? bbhta::RuleVariant::derived
                                                            : bbhta::RuleVariant::printed;
  config.learn_params = c->learn_params != 0;
  config.validate();
  return config;
}

}  // namespace

extern "C" {

const char* bbhta_version(void) { return "1.0.0"; }

const char* bbhta_last_error(void) { return last_error.c_str(); }

const char* bbhta_status_string(bbhta_status status) {
  switch (status) {
    case BBHTA_OK: return "ok";
    case BBHTA_ERR_INVALID_ARGUMENT: return "invalid argument";
    case BBHTA_ERR_NUMERICAL: return "numerical error";
    case BBHTA_ERR_IO: return "I/O error";
    case BBHTA_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void bbhta_solver_config_default(bbhta_solver_config* config) {
  if (config == nullptr) return;
  const bbhta::SolverConfig d;
  config->k_max = d.k_max;
  config->epsilon = d.epsilon;
  config->p_init = d.p_init;
  config->p01_init = d.p01_init;
  config->variant = BBHTA_VARIANT_DERIVED;
  config->learn_params = d.learn_params ? 1 : 0;
}

void bbhta_gen_params_default(bbhta_gen_params* params) {
  if (params == nullptr) return;
  params->n = 192;
  params->m = 512;
  params->p = 0.9;
  params->p01 = 0.09;
  params->sigma_theta = 1.0;
  params->snr_db = 20.0;
  params->seed = 1;
  params->trial_index = 0;
}

bbhta_status bbhta_instance_generate(const bbhta_gen_params* params, bbhta_instance** out) {
  return guarded([&] {
    require(params != nullptr && out != nullptr, "null argument");
    bbhta::TrialSpec spec;
    spec.n = static_cast<Eigen::Index>(params->n);
    spec.m = static_cast<Eigen::Index>(params->m);
    spec.markov = bbhta::MarkovChainParams::from_p_p01(params->p, params->p01);
    spec.sigma_theta = params->sigma_theta;
    spec.snr_db = params->snr_db;
    const bbhta::TrialSeed seed{params->seed, params->trial_index};
    bbhta::SyntheticTrial trial = bbhta::generate_trial(spec, seed);

    auto handle = std::make_unique<bbhta_instance>();
    auto& d = handle->data;
    d.phi = std::move(trial.phi);
    d.y = std::move(trial.measurement.y);
    d.w_gen = trial.signal.w();
    d.s_gen = trial.signal.s();
    d.model = bbhta::InstanceModel{spec.markov.p(),  spec.markov.p10(), spec.markov.p01(), spec.sigma_theta,
                                   trial.measurement.sigma_n, spec.snr_db, params->seed, params->trial_index};
    *out = handle.release();
  });
}

bbhta_status bbhta_instance_create(size_t n, size_t m, const double* phi, const double* y, bbhta_instance** out) {
  return guarded([&] {
    require(phi != nullptr && y != nullptr && out != nullptr, "null argument");
    require(n > 0 && m > 0, "dimensions must be positive");
    auto handle = std::make_unique<bbhta_instance>();
    const auto rows = static_cast<Eigen::Index>(n);
    const auto cols = static_cast<Eigen::Index>(m);
    handle->data.phi = Eigen::Map<const bbhta::Matrix>(phi, rows, cols);
    handle->data.y = Eigen::Map<const bbhta::Vector>(y, rows);
    *out = handle.release();
  });
}

bbhta_status bbhta_instance_load(const char* dir, bbhta_instance** out) {
  return guarded([&] {
    require(dir != nullptr && out != nullptr, "null argument");
    auto handle = std::make_unique<bbhta_instance>();
    handle->data = bbhta::load_instance(dir);
    *out = handle.release();
  });
}

bbhta_status bbhta_instance_save(const bbhta_instance* instance, const char* dir) {
  return guarded([&] {
    require(instance != nullptr && dir != nullptr, "null argument");
    bbhta::save_instance(dir, instance->data);
  });
}

void bbhta_instance_free(bbhta_instance* instance) { delete instance; }

bbhta_status bbhta_instance_dims(const bbhta_instance* instance, size_t* n, size_t* m) {
  return guarded([&] {
    require(instance != nullptr && n != nullptr && m != nullptr, "null argument");
    *n = static_cast<size_t>(instance->data.phi.rows());
    *m = static_cast<size_t>(instance->data.phi.cols());
  });
}

int bbhta_instance_has_truth(const bbhta_instance* instance) {
  return instance != nullptr && instance->data.w_gen.has_value() ? 1 : 0;
}

bbhta_status bbhta_instance_copy_truth(const bbhta_instance* instance, double* w, size_t len) {
  return guarded([&] {
    require(instance != nullptr && w != nullptr, "null argument");
    require(instance->data.w_gen.has_value(), "instance has no generating signal");
    const auto& truth = *instance->data.w_gen;
    require(len == static_cast<size_t>(truth.size()), "buffer length must equal M");
    std::copy(truth.data(), truth.data() + truth.size(), w);
  });
}

bbhta_status bbhta_solve(const bbhta_instance* instance, bbhta_solver_kind kind, const bbhta_solver_config* config,
                         bbhta_result** out) {
  return guarded([&] {
    require(instance != nullptr && out != nullptr, "null argument");
    const auto& d = instance->data;
    const bbhta::SolverConfig cfg = to_config(config);
    auto handle = std::make_unique<bbhta_result>();
    switch (kind) {
      case BBHTA_SOLVER_BLOCK_BHTA: handle->output = bbhta::run_block_bhta(d.y, d.phi, cfg); break;
      case BBHTA_SOLVER_BPA_IID: handle->output = bbhta::run_bpa_baseline(d.y, d.phi, cfg); break;
      case BBHTA_SOLVER_ORACLE_LMMSE: {
        require(d.s_gen.has_value() && d.model.has_value(), "oracle-lmmse needs a generated instance (s_gen.txt and model.txt)");
        const auto& mdl = *d.model;
        const bbhta::BghmmModel model(bbhta::MarkovChainParams::from_transitions(mdl.p10, mdl.p01), mdl.sigma_theta,
                                      mdl.sigma_n);
        handle->output = bbhta::run_oracle_support_lmmse(d.y, d.phi, *d.s_gen, model);
        break;
      }
      default: throw bbhta::InvalidArgument("unknown solver kind");
    }
    *out = handle.release();
  });
}

void bbhta_result_free(bbhta_result* result) { delete result; }

bbhta_status bbhta_result_info_get(const bbhta_result* result, bbhta_result_info* info) {
  return guarded([&] {
    require(result != nullptr && info != nullptr, "null argument");
    const auto& o = result->output;
    *info = bbhta_result_info{};
    info->iterations = o.iterations;
    info->final_difference = o.final_difference;
    info->support_size = bbhta::support_size(o.s_hat);
    if (!o.hyper_trace.empty()) {
      const auto& h = o.hyper_trace.back();
      info->sigma_n = h.sigma_n;
      info->sigma_theta = h.sigma_theta;
      info->p = h.p;
      info->p10 = h.p10;
      info->p01 = h.p01;
    }
    info->warning_count = o.warnings.size();
  });
}

bbhta_status bbhta_result_copy_signal(const bbhta_result* result, double* w, size_t len) {
  return guarded([&] {
    require(result != nullptr && w != nullptr, "null argument");
    const auto& v = result->output.w_hat;
    require(len == static_cast<size_t>(v.size()), "buffer length must equal M");
    std::copy(v.data(), v.data() + v.size(), w);
  });
}

bbhta_status bbhta_result_copy_support(const bbhta_result* result, unsigned char* s, size_t len) {
  return guarded([&] {
    require(result != nullptr && s != nullptr, "null argument");
    const auto& v = result->output.s_hat;
    require(len == v.size(), "buffer length must equal M");
    std::copy(v.begin(), v.end(), s);
  });
}

const char* bbhta_result_warning(const bbhta_result* result, size_t index) {
  if (result == nullptr || index >= result->output.warnings.size()) return nullptr;
  return result->output.warnings[index].c_str();
}

bbhta_status bbhta_result_nmse_db(const bbhta_result* result, const bbhta_instance* instance, double* nmse_db) {
  return guarded([&] {
    require(result != nullptr && instance != nullptr && nmse_db != nullptr, "null argument");
    require(instance->data.w_gen.has_value(), "instance has no generating signal");
    *nmse_db = bbhta::nmse_db(result->output.w_hat, *instance->data.w_gen);
  });
}

bbhta_status bbhta_result_save(const bbhta_result* result, const char* dir) {
  return guarded([&] {
    require(result != nullptr && dir != nullptr, "null argument");
    const std::filesystem::path out(dir);
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec) throw bbhta::IoError("cannot create directory '" + out.string() + "': " + ec.message());
    const auto& o = result->output;
    bbhta::write_vector(out / "w_hat.txt", o.w_hat);
    bbhta::Vector s(static_cast<Eigen::Index>(o.s_hat.size()));
    for (std::size_t i = 0; i < o.s_hat.size(); ++i) s[static_cast<Eigen::Index>(i)] = o.s_hat[i];
    bbhta::write_vector(out / "s_hat.txt", s);
  });
}

bbhta_status bbhta_bench_run(const bbhta_bench_options* options, bbhta_summary** out) {
  return guarded([&] {
    require(options != nullptr && out != nullptr, "null argument");
    require(options->manifest_path != nullptr && options->out_dir != nullptr, "manifest_path and out_dir are required");
    bbhta::ExperimentManifest manifest = bbhta::load_manifest(options->manifest_path);
    if (options->trials_override > 0) manifest.trials = options->trials_override;
    if (options->variant_override >= 0) {
      require(options->variant_override <= BBHTA_VARIANT_PRINTED, "unknown rule variant");
      manifest.solver_config.rule_variant = options->variant_override == BBHTA_VARIANT_DERIVED
                                                ? bbhta::RuleVariant::derived
                                                : bbhta::RuleVariant::printed;
    }
    if (options->has_seed_override) manifest.base_seed = options->seed_override;

    const bbhta::ExperimentRun run = bbhta::run_experiment(manifest, options->workers);
    auto handle = std::make_unique<bbhta_summary>();
    handle->rows = bbhta::aggregate(run.records);
    handle->resampled_signals = run.resampled_signals;
    handle->failures = run.failures;
    bbhta::emit_reports(handle->rows, run.records, options->out_dir, {{manifest.name, manifest.grid_label()}});
    *out = handle.release();
  });
}

bbhta_status bbhta_report(const char* records_csv, const char* out_dir, const char* x_label, bbhta_summary** out) {
  return guarded([&] {
    require(records_csv != nullptr && out_dir != nullptr && out != nullptr, "null argument");
    const auto records = bbhta::read_records_csv(records_csv);
    require(!records.empty(), "records file has no rows");
    auto handle = std::make_unique<bbhta_summary>();
    handle->rows = bbhta::aggregate(records);
    std::map<std::string, std::string> labels;
    if (x_label != nullptr) {
      for (const auto& row : handle->rows) labels[row.experiment] = x_label;
    }
    bbhta::emit_reports(handle->rows, records, out_dir, labels);
    *out = handle.release();
  });
}

void bbhta_summary_free(bbhta_summary* summary) { delete summary; }

size_t bbhta_summary_row_count(const bbhta_summary* summary) { return summary ? summary->rows.size() : 0; }

bbhta_status bbhta_summary_row_get(const bbhta_summary* summary, size_t index, bbhta_summary_row* row) {
  return guarded([&] {
    require(summary != nullptr && row != nullptr, "null argument");
    require(index < summary->rows.size(), "row index out of range");
    const auto& r = summary->rows[index];
    *row = bbhta_summary_row{r.experiment.c_str(), r.solver.c_str(), r.grid_value,      r.trials,
                             r.mean_nmse_db,       r.stderr_nmse_db,  r.mean_iterations, r.mean_support_f1,
                             r.failures,           r.exact_recoveries};
  });
}

int bbhta_summary_resampled_signals(const bbhta_summary* summary) { return summary ? summary->resampled_signals : 0; }

size_t bbhta_summary_failure_count(const bbhta_summary* summary) { return summary ? summary->failures.size() : 0; }

const char* bbhta_summary_failure(const bbhta_summary* summary, size_t index) {
  if (summary == nullptr || index >= summary->failures.size()) return nullptr;
  return summary->failures[index].c_str();
}

}  // extern "C"
