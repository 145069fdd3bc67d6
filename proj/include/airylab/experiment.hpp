#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "airylab/ensemble.hpp"

namespace airylab {

enum class ExperimentKind {
    semicircle,
    clt,
    ensemble_trace,
    trace_agreement,
    kernel,
    trace_mc,
    excursion_identity,
    okounkov,
    semigroup_check,
};

ExperimentKind experiment_from_name(const std::string& name);
std::string experiment_name(ExperimentKind kind);

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::okounkov;
    double beta = 2.0;  // kBetaInfinity for the noise-free semigroup
    int n = 1000;
    double t = 1.0;
    double x = 0.5;
    double y = 0.5;
    SpectralWindow window = SpectralWindow::full();

    // Grids; zero means "derive the default from t".
    int n_grid = 0;        // time steps per unit time, default 4096
    double delta = 0.0;    // local-time bin width, default sqrt(t_max)/256
    double delta_a = 1.0 / 64.0;
    double a_max = 16.0;
    double x_max = 0.0;    // diagonal quadrature cutoff, default 20 max(1, sqrt(t))

    // Sample counts.
    long long n_matrices = 200;
    long long n_paths = 400;
    int n_w_grids = 200;
    long long n_samples = 100000;

    std::uint64_t seed = 1;
    int threads = 0;  // 0: AIRY_LAB_THREADS, else hardware
    bool emit_samples = false;
    std::string out_dir;

    int resolved_n_grid(double t_max) const;
    double resolved_delta(double t_max) const;
    double resolved_x_max() const;
};

// Parses a key = value document ('#' comments, optional [section] headers).
// Unknown keys and malformed values are rejected with a line diagnostic. The
// fallback experiment name (from the CLI positional) is used when the
// document has no 'experiment' line; a conflicting line is an error.
ExperimentConfig parse_config(const std::string& text,
                              const std::string& fallback_experiment = "");

ExperimentConfig load_config_file(const std::string& path,
                                  const std::string& fallback_experiment = "");

// Runs the configured experiment and returns the JSON summary
// {experiment, params, seed, results: [...], runtime_s}. When
// cfg.emit_samples is set and the experiment produces raw per-sample values,
// they are written as CSV under cfg.out_dir.
nlohmann::json run_experiment(const ExperimentConfig& cfg);

// True iff every result record with a pass flag passed.
bool all_passed(const nlohmann::json& summary);

}  // namespace airylab
