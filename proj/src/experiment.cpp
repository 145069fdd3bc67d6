#include "airylab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "airylab/airy.hpp"
#include "airylab/parallel.hpp"
#include "airylab/paths.hpp"
#include "airylab/spectral.hpp"
#include "airylab/stats.hpp"
#include "airylab/verify.hpp"

namespace airylab {

namespace {

using nlohmann::json;

constexpr std::uint64_t kSubBase = 1ULL << 40;  // task-index block per sub-run

struct NamedKind {
    const char* name;
    ExperimentKind kind;
};

constexpr NamedKind kKinds[] = {
    {"semicircle", ExperimentKind::semicircle},
    {"clt", ExperimentKind::clt},
    {"ensemble-trace", ExperimentKind::ensemble_trace},
    {"trace-agreement", ExperimentKind::trace_agreement},
    {"kernel", ExperimentKind::kernel},
    {"trace-mc", ExperimentKind::trace_mc},
    {"excursion-identity", ExperimentKind::excursion_identity},
    {"okounkov", ExperimentKind::okounkov},
    {"semigroup-check", ExperimentKind::semigroup_check},
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void config_error(int line, const std::string& msg) {
    throw std::runtime_error("config line " + std::to_string(line) + ": " + msg);
}

double parse_real(const std::string& v, int line, const std::string& key) {
    if (v == "inf" || v == "infinity") return kBetaInfinity;
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        config_error(line, "expected a real for '" + key + "', got '" + v + "'");
    }
    if (pos != v.size())
        config_error(line, "trailing characters in value for '" + key + "'");
    return x;
}

long long parse_int(const std::string& v, int line, const std::string& key) {
    std::size_t pos = 0;
    long long x = 0;
    try {
        x = std::stoll(v, &pos);
    } catch (const std::exception&) {
        config_error(line, "expected an integer for '" + key + "', got '" + v + "'");
    }
    if (pos != v.size())
        config_error(line, "trailing characters in value for '" + key + "'");
    return x;
}

bool parse_bool(const std::string& v, int line, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    config_error(line, "expected a boolean for '" + key + "', got '" + v + "'");
}

// One result record of the output schema. `predicted` NaN means "no target".
json make_result(const std::string& name, double estimate, double se,
                 long long count) {
    json r;
    r["name"] = name;
    r["estimate"] = estimate;
    r["stderr"] = se;
    r["count"] = count;
    return r;
}

json make_checked(const std::string& name, double estimate, double se,
                  long long count, double predicted, double rel_tol) {
    json r = make_result(name, estimate, se, count);
    r["predicted"] = predicted;
    const double z = se > 0.0 ? (estimate - predicted) / se : 0.0;
    r["z"] = z;
    const double tol = std::max(3.0 * se, rel_tol * std::abs(predicted));
    r["pass"] = std::abs(estimate - predicted) <= tol;
    return r;
}

json from_estimate(const std::string& name, const McEstimate& e) {
    return make_result(name, e.mean, e.std_error(), e.count);
}

json from_estimate(const std::string& name, const McEstimate& e, double predicted,
                   double rel_tol) {
    return make_checked(name, e.mean, e.std_error(), e.count, predicted, rel_tol);
}

// Chunked sample loop: task i owns samples [i*chunk, ...) from stream
// (seed, base+i); per-task accumulators merged in index order, so the result
// is independent of the thread count.
McEstimate parallel_accumulate(std::uint64_t seed, std::uint64_t base,
                               long long n_total, long long chunk, int threads,
                               const std::function<double(RngStream&)>& fn) {
    const long long n_tasks = (n_total + chunk - 1) / chunk;
    std::vector<McEstimate> parts(n_tasks);
    parallel_tasks(n_tasks, threads, [&](long long i) {
        RngStream rng(seed, base + static_cast<std::uint64_t>(i));
        const long long lo = i * chunk;
        const long long hi = std::min(n_total, lo + chunk);
        for (long long j = lo; j < hi; ++j) parts[i].add(fn(rng));
    });
    McEstimate total;
    for (const auto& p : parts) total.merge(p);
    return total;
}

void write_csv(const ExperimentConfig& cfg, const std::string& stem,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    namespace fs = std::filesystem;
    const fs::path dir = cfg.out_dir.empty() ? fs::path(".") : fs::path(cfg.out_dir);
    fs::create_directories(dir);
    std::ofstream out(dir / (stem + ".csv"));
    out.precision(17);
    for (std::size_t c = 0; c < header.size(); ++c)
        out << (c ? "," : "") << header[c];
    out << "\n";
    const std::size_t rows = columns.empty() ? 0 : columns[0].size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c)
            out << (c ? "," : "") << columns[c][r];
        out << "\n";
    }
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::runtime_error("config: " + msg);
}

// ---- experiment runners ------------------------------------------------

json run_semicircle(const ExperimentConfig& cfg) {
    require(std::isfinite(cfg.beta), "semicircle needs a finite beta");
    json results = json::array();
    const int ks[] = {2, 4, 6};
    for (int i = 0; i < 3; ++i) {
        const int k = ks[i];
        const auto rep = empirical_spectral_moment(cfg.beta, cfg.n, k, cfg.n_matrices,
                                                   cfg.seed, i * kSubBase, cfg.threads);
        const double rel = k == 2 ? 0.02 : 0.03;
        results.push_back(from_estimate("moment_k" + std::to_string(k), rep.empirical,
                                        rep.predicted, rel));
    }
    return results;
}

json run_clt(const ExperimentConfig& cfg) {
    require(std::isfinite(cfg.beta), "clt needs a finite beta");
    struct Case {
        int k, kp;
        double a, ap;
    };
    const Case cases[] = {{1, 1, 1.0, 1.0}, {2, 2, 1.0, 1.0}, {1, 1, 0.5, 1.0},
                          {1, 2, 1.0, 1.0}};
    json results = json::array();
    for (int i = 0; i < 4; ++i) {
        const auto& c = cases[i];
        const auto rep = clt_covariance_empirical(cfg.beta, cfg.n, c.a, c.ap, c.k,
                                                  c.kp, cfg.n_matrices, cfg.seed,
                                                  i * kSubBase, cfg.threads);
        char name[64];
        std::snprintf(name, sizeof(name), "cov_k%d_k%d_a%g_a%g", c.k, c.kp, c.a, c.ap);
        results.push_back(make_checked(name, rep.empirical, rep.jackknife_se,
                                       rep.n_samples, rep.predicted, 0.05));
    }
    return results;
}

json run_ensemble_trace(const ExperimentConfig& cfg) {
    require(std::isfinite(cfg.beta), "ensemble-trace needs a finite beta");
    const auto rep = trace_agreement(cfg.beta, cfg.n, cfg.t, cfg.window,
                                     cfg.n_matrices, cfg.seed, 0, cfg.threads);
    json results = json::array();
    const bool has_target = cfg.beta == 2.0 && cfg.window.is_full();
    if (has_target) {
        const double target = okounkov_expected_trace(cfg.t);
        results.push_back(from_estimate("exp_edge_trace", rep.exp_trace, target, 0.15));
        results.push_back(from_estimate("power_trace", rep.power_trace, target, 0.15));
    } else {
        results.push_back(from_estimate("exp_edge_trace", rep.exp_trace));
        results.push_back(from_estimate("power_trace", rep.power_trace));
    }
    results.push_back(from_estimate("abs_diff", rep.abs_diff));
    const double comb = std::sqrt(rep.exp_trace.std_error() * rep.exp_trace.std_error() +
                                  rep.power_trace.std_error() * rep.power_trace.std_error());
    json agree = make_result("trace_pair_gap", rep.power_trace.mean - rep.exp_trace.mean,
                             comb, rep.n_matrices);
    agree["predicted"] = 0.0;
    agree["z"] = comb > 0.0 ? (rep.power_trace.mean - rep.exp_trace.mean) / comb : 0.0;
    agree["pass"] = std::abs(rep.power_trace.mean - rep.exp_trace.mean) <= 3.0 * comb;
    results.push_back(agree);
    return results;
}

json run_trace_agreement(const ExperimentConfig& cfg) {
    require(std::isfinite(cfg.beta), "trace-agreement needs a finite beta");
    const int sizes[] = {200, 500, 1000};
    double diffs[3] = {0, 0, 0};
    json results = json::array();
    TraceAgreementReport last;
    for (int i = 0; i < 3; ++i) {
        const auto rep = trace_agreement(cfg.beta, sizes[i], cfg.t, cfg.window,
                                         cfg.n_matrices, cfg.seed, i * kSubBase,
                                         cfg.threads);
        diffs[i] = rep.abs_diff.mean;
        results.push_back(from_estimate("abs_diff_N" + std::to_string(sizes[i]),
                                        rep.abs_diff));
        if (i == 2) last = rep;
    }
    json decay = make_result("abs_diff_decay", diffs[2] - diffs[0], 0.0,
                             cfg.n_matrices);
    decay["pass"] = diffs[0] > diffs[1] && diffs[1] > diffs[2];
    results.push_back(decay);

    const double comb =
        std::sqrt(last.exp_trace.std_error() * last.exp_trace.std_error() +
                  last.power_trace.std_error() * last.power_trace.std_error());
    const double gap = last.power_trace.mean - last.exp_trace.mean;
    json agree = make_result("trace_pair_gap_N1000", gap, comb, cfg.n_matrices);
    agree["predicted"] = 0.0;
    agree["z"] = comb > 0.0 ? gap / comb : 0.0;
    agree["pass"] = std::abs(gap) <= 3.0 * comb;
    results.push_back(agree);
    return results;
}

json run_kernel(const ExperimentConfig& cfg) {
    const auto params = EnsembleParams::gaussian(cfg.beta);
    const PathGrid grid{cfg.resolved_n_grid(1.0)};
    KernelQuery q;
    q.x = cfg.x;
    q.y = cfg.y;
    q.t = cfg.t;
    q.window = cfg.window;
    q.parity = Parity::both;

    std::vector<double> means(cfg.n_w_grids);
    std::vector<double> clipped(cfg.n_w_grids);
    parallel_tasks(cfg.n_w_grids, cfg.threads, [&](long long i) {
        RngStream rng(cfg.seed, static_cast<std::uint64_t>(i));
        const auto w = sample_white_noise(cfg.delta_a, cfg.a_max, rng);
        const auto kr = kernel_mc(q, params, w, static_cast<int>(cfg.n_paths), grid, rng);
        means[i] = kr.est.mean;
        clipped[i] = static_cast<double>(kr.clipped);
    });
    const auto mc = accumulate(means);
    long long total_clipped = 0;
    for (double c : clipped) total_clipped += static_cast<long long>(c);

    const auto wavg_vals = parallel_sample(
        cfg.seed, kSubBase, cfg.n_w_grids, cfg.threads, [&](RngStream& rng) {
            return kernel_mc_wavg(cfg.x, cfg.y, cfg.t, cfg.window, cfg.beta,
                                  static_cast<int>(cfg.n_paths), grid, rng)
                .mean;
        });
    const auto wavg = accumulate(wavg_vals);

    json results = json::array();
    results.push_back(from_estimate("kernel_mc", mc));
    results.push_back(from_estimate("kernel_wavg", wavg));
    const double comb = std::sqrt(mc.std_error() * mc.std_error() +
                                  wavg.std_error() * wavg.std_error());
    json gap = make_result("mc_vs_wavg_gap", mc.mean - wavg.mean, comb, mc.count);
    gap["predicted"] = 0.0;
    gap["z"] = comb > 0.0 ? (mc.mean - wavg.mean) / comb : 0.0;
    gap["pass"] = std::abs(mc.mean - wavg.mean) <= 3.0 * comb;
    results.push_back(gap);
    results.push_back(make_result("clipped_paths", static_cast<double>(total_clipped),
                                  0.0, total_clipped));
    return results;
}

json run_trace_mc(const ExperimentConfig& cfg) {
    const auto params = EnsembleParams::gaussian(cfg.beta);
    const PathGrid grid{cfg.resolved_n_grid(1.0)};
    QuadratureSpec quad = QuadratureSpec::for_time(cfg.t);
    if (cfg.x_max > 0.0) quad.x_max = cfg.x_max;

    std::vector<double> means(cfg.n_w_grids);
    std::vector<double> clipped(cfg.n_w_grids);
    parallel_tasks(cfg.n_w_grids, cfg.threads, [&](long long i) {
        RngStream rng(cfg.seed, static_cast<std::uint64_t>(i));
        const auto w = sample_white_noise(cfg.delta_a, cfg.a_max, rng);
        const auto tr = trace_mc(cfg.t, cfg.window, params, w,
                                 static_cast<int>(cfg.n_paths), quad, grid, rng);
        means[i] = tr.est.mean;
        clipped[i] = static_cast<double>(tr.clipped);
    });
    const auto mc = accumulate(means);
    long long total_clipped = 0;
    for (double c : clipped) total_clipped += static_cast<long long>(c);

    const int n_grid = cfg.resolved_n_grid(1.0);
    const double delta = cfg.resolved_delta(1.0);
    const auto ref = parallel_accumulate(
        cfg.seed, kSubBase, cfg.n_samples, 500, cfg.threads, [&](RngStream& rng) {
            return trace_excursion_sample(cfg.t, cfg.beta, n_grid, delta, rng);
        });

    json results = json::array();
    results.push_back(from_estimate("trace_mc", mc));
    results.push_back(from_estimate("trace_excursion", ref));
    const double comb = std::sqrt(mc.std_error() * mc.std_error() +
                                  ref.std_error() * ref.std_error());
    json gap = make_result("trace_gap", mc.mean - ref.mean, comb, mc.count);
    gap["predicted"] = 0.0;
    gap["z"] = comb > 0.0 ? (mc.mean - ref.mean) / comb : 0.0;
    gap["pass"] = std::abs(mc.mean - ref.mean) <= 3.0 * comb;
    results.push_back(gap);
    results.push_back(make_result("clipped_paths", static_cast<double>(total_clipped),
                                  0.0, total_clipped));
    return results;
}

json run_excursion_identity(const ExperimentConfig& cfg) {
    const int n_grid = cfg.resolved_n_grid(1.0);
    const double delta = cfg.resolved_delta(1.0);
    const long long n = cfg.n_samples;
    const long long chunk = 200;
    const long long n_tasks = (n + chunk - 1) / chunk;

    std::vector<double> area(n), half_l2(n), d(n);
    parallel_tasks(n_tasks, cfg.threads, [&](long long i) {
        RngStream rng(cfg.seed, static_cast<std::uint64_t>(i));
        const long long lo = i * chunk;
        const long long hi = std::min(n, lo + chunk);
        for (long long j = lo; j < hi; ++j) {
            const auto path = sample_excursion(n_grid, rng);
            const auto [a, raw_l2] = area_and_l2(path, delta);
            const double l2 = raw_l2 + binned_l2_correction(delta, 1.0);
            area[j] = a;
            half_l2[j] = 0.5 * l2;
            d[j] = a - 0.5 * l2;
        }
    });

    McEstimate md;
    for (double v : d) md.add(v);
    const double var = md.variance();
    // Moment-based SE of the sample variance.
    double m4 = 0.0;
    for (double v : d) {
        const double c = v - md.mean;
        m4 += c * c * c * c;
    }
    m4 /= static_cast<double>(n);
    const double se_var = std::sqrt(std::max(0.0, m4 - var * var) /
                                    static_cast<double>(n));

    json results = json::array();
    results.push_back(from_estimate("identity_mean", md, 0.0, 0.0));
    results.push_back(make_checked("identity_variance", var, se_var, n, 1.0 / 12.0, 0.10));

    const double p_norm = normality_test(d, 0.0, 1.0 / 12.0);
    json ks = make_result("ks_vs_normal_p", p_norm, 0.0, n);
    ks["pass"] = p_norm > 0.01;
    results.push_back(ks);

    // Equal-distribution check on independent halves.
    const long long h = n / 2;
    const double p_two =
        ks_two_sample(std::vector<double>(area.begin(), area.begin() + h),
                      std::vector<double>(half_l2.begin() + h, half_l2.end()))
            .p_value;
    json ks2 = make_result("ks_area_vs_half_l2_p", p_two, 0.0, n);
    ks2["pass"] = p_two > 0.01;
    results.push_back(ks2);

    if (cfg.emit_samples)
        write_csv(cfg, "excursion_identity_samples", {"area", "half_l2", "d"},
                  {area, half_l2, d});
    return results;
}

json run_okounkov(const ExperimentConfig& cfg) {
    require(cfg.beta == 2.0, "okounkov closed form holds at beta = 2 only");
    const int n_grid = cfg.resolved_n_grid(1.0);
    const double delta = cfg.resolved_delta(1.0);
    const auto est = parallel_accumulate(
        cfg.seed, 0, cfg.n_samples, 500, cfg.threads, [&](RngStream& rng) {
            return trace_excursion_sample(cfg.t, cfg.beta, n_grid, delta, rng);
        });
    json results = json::array();
    results.push_back(from_estimate("expected_trace", est,
                                    okounkov_expected_trace(cfg.t), 0.05));
    return results;
}

json run_semigroup_check(const ExperimentConfig& cfg) {
    const auto params = EnsembleParams::gaussian(cfg.beta);
    const PathGrid grid{cfg.resolved_n_grid(1.0)};
    QuadratureSpec z_quad = QuadratureSpec::for_time(cfg.t);
    if (cfg.x_max > 0.0) z_quad.x_max = cfg.x_max;
    const std::vector<double> points = {0.25, 0.75, 1.25, 1.75, 2.25};

    RngStream rng(cfg.seed, 0);
    const auto w = sample_white_noise(cfg.delta_a, cfg.a_max, rng);
    const auto chk = semigroup_residual(cfg.t / 2.0, cfg.t / 2.0, cfg.window, params,
                                        w, static_cast<int>(cfg.n_paths), points,
                                        z_quad, grid, rng);
    json results = json::array();
    json r = make_result("max_residual", chk.max_residual, chk.se_at_max,
                         cfg.n_paths);
    r["predicted"] = 0.0;
    r["z"] = chk.max_z;
    r["pass"] = chk.max_z < 3.0;
    results.push_back(r);
    results.push_back(make_result("clipped_paths", static_cast<double>(chk.clipped),
                                  0.0, chk.clipped));
    return results;
}

json params_json(const ExperimentConfig& cfg) {
    json p;
    p["beta"] = std::isfinite(cfg.beta) ? json(cfg.beta) : json("inf");
    p["n"] = cfg.n;
    p["t"] = cfg.t;
    p["x"] = cfg.x;
    p["y"] = cfg.y;
    p["window_lower"] = cfg.window.lower;
    p["window_upper"] = std::isfinite(cfg.window.upper) ? json(cfg.window.upper)
                                                        : json("inf");
    p["n_grid"] = cfg.resolved_n_grid(1.0);
    p["delta"] = cfg.resolved_delta(1.0);
    p["delta_a"] = cfg.delta_a;
    p["a_max"] = cfg.a_max;
    p["x_max"] = cfg.resolved_x_max();
    p["n_matrices"] = cfg.n_matrices;
    p["n_paths"] = cfg.n_paths;
    p["n_w_grids"] = cfg.n_w_grids;
    p["n_samples"] = cfg.n_samples;
    p["threads"] = resolve_threads(cfg.threads);
    return p;
}

}  // namespace

ExperimentKind experiment_from_name(const std::string& name) {
    for (const auto& nk : kKinds)
        if (name == nk.name) return nk.kind;
    throw std::runtime_error("unknown experiment '" + name + "'");
}

std::string experiment_name(ExperimentKind kind) {
    for (const auto& nk : kKinds)
        if (kind == nk.kind) return nk.name;
    return "?";
}

int ExperimentConfig::resolved_n_grid(double t_max) const {
    if (n_grid > 0) return n_grid;
    return std::max(8, static_cast<int>(std::llround(4096.0 * t_max)));
}

double ExperimentConfig::resolved_delta(double t_max) const {
    if (delta > 0.0) return delta;
    // Level bins no finer than twice the time-grid roughness scale sqrt(dt):
    // below that the piecewise-linear path smooths the occupation density and
    // biases the squared-local-time integral beyond the Monte Carlo error.
    const double dt = t_max / resolved_n_grid(t_max);
    return std::max(std::sqrt(t_max) / 256.0, 2.0 * std::sqrt(dt));
}

double ExperimentConfig::resolved_x_max() const {
    return x_max > 0.0 ? x_max : 20.0 * std::max(1.0, std::sqrt(t));
}

ExperimentConfig parse_config(const std::string& text,
                              const std::string& fallback_experiment) {
    ExperimentConfig cfg;
    bool have_experiment = false;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') continue;  // section header
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            config_error(line_no, "expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) config_error(line_no, "empty key");
        if (value.empty()) config_error(line_no, "empty value for '" + key + "'");

        if (key == "experiment") {
            try {
                cfg.experiment = experiment_from_name(value);
            } catch (const std::exception& e) {
                config_error(line_no, e.what());
            }
            if (!fallback_experiment.empty() && value != fallback_experiment)
                config_error(line_no, "config experiment '" + value +
                                          "' conflicts with requested '" +
                                          fallback_experiment + "'");
            have_experiment = true;
        } else if (key == "beta") {
            cfg.beta = parse_real(value, line_no, key);
            if (!(cfg.beta > 0.0)) config_error(line_no, "beta must be positive");
        } else if (key == "n") {
            cfg.n = static_cast<int>(parse_int(value, line_no, key));
            if (cfg.n < 2) config_error(line_no, "n must be >= 2");
        } else if (key == "t") {
            cfg.t = parse_real(value, line_no, key);
            if (!(cfg.t > 0.0) || !std::isfinite(cfg.t))
                config_error(line_no, "t must be positive and finite");
        } else if (key == "x") {
            cfg.x = parse_real(value, line_no, key);
        } else if (key == "y") {
            cfg.y = parse_real(value, line_no, key);
        } else if (key == "window_lower") {
            cfg.window.lower = parse_real(value, line_no, key);
            if (cfg.window.lower < 0.0)
                config_error(line_no, "window_lower must be >= 0");
        } else if (key == "window_upper") {
            cfg.window.upper = parse_real(value, line_no, key);
        } else if (key == "n_grid") {
            cfg.n_grid = static_cast<int>(parse_int(value, line_no, key));
            if (cfg.n_grid < 1) config_error(line_no, "n_grid must be >= 1");
        } else if (key == "delta") {
            cfg.delta = parse_real(value, line_no, key);
            if (!(cfg.delta > 0.0)) config_error(line_no, "delta must be positive");
        } else if (key == "delta_a") {
            cfg.delta_a = parse_real(value, line_no, key);
            if (!(cfg.delta_a > 0.0)) config_error(line_no, "delta_a must be positive");
        } else if (key == "a_max") {
            cfg.a_max = parse_real(value, line_no, key);
            if (!(cfg.a_max > 0.0)) config_error(line_no, "a_max must be positive");
        } else if (key == "x_max") {
            cfg.x_max = parse_real(value, line_no, key);
            if (!(cfg.x_max > 0.0)) config_error(line_no, "x_max must be positive");
        } else if (key == "n_matrices") {
            cfg.n_matrices = parse_int(value, line_no, key);
            if (cfg.n_matrices < 1) config_error(line_no, "n_matrices must be >= 1");
        } else if (key == "n_paths") {
            cfg.n_paths = parse_int(value, line_no, key);
            if (cfg.n_paths < 1) config_error(line_no, "n_paths must be >= 1");
        } else if (key == "n_w_grids") {
            cfg.n_w_grids = static_cast<int>(parse_int(value, line_no, key));
            if (cfg.n_w_grids < 1) config_error(line_no, "n_w_grids must be >= 1");
        } else if (key == "n_samples") {
            cfg.n_samples = parse_int(value, line_no, key);
            if (cfg.n_samples < 1) config_error(line_no, "n_samples must be >= 1");
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_int(value, line_no, key));
        } else if (key == "threads") {
            cfg.threads = static_cast<int>(parse_int(value, line_no, key));
            if (cfg.threads < 0) config_error(line_no, "threads must be >= 0");
        } else if (key == "emit_samples") {
            cfg.emit_samples = parse_bool(value, line_no, key);
        } else if (key == "out_dir") {
            cfg.out_dir = value;
        } else {
            config_error(line_no, "unknown key '" + key + "'");
        }
    }
    if (!have_experiment) {
        if (fallback_experiment.empty())
            throw std::runtime_error("config: missing 'experiment'");
        cfg.experiment = experiment_from_name(fallback_experiment);
    }
    if (cfg.window.is_empty()) throw std::runtime_error("config: empty window");
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path,
                                  const std::string& fallback_experiment) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), fallback_experiment);
}

json run_experiment(const ExperimentConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    json results;
    switch (cfg.experiment) {
        case ExperimentKind::semicircle: results = run_semicircle(cfg); break;
        case ExperimentKind::clt: results = run_clt(cfg); break;
        case ExperimentKind::ensemble_trace: results = run_ensemble_trace(cfg); break;
        case ExperimentKind::trace_agreement: results = run_trace_agreement(cfg); break;
        case ExperimentKind::kernel: results = run_kernel(cfg); break;
        case ExperimentKind::trace_mc: results = run_trace_mc(cfg); break;
        case ExperimentKind::excursion_identity:
            results = run_excursion_identity(cfg);
            break;
        case ExperimentKind::okounkov: results = run_okounkov(cfg); break;
        case ExperimentKind::semigroup_check: results = run_semigroup_check(cfg); break;
    }
    const auto stop = std::chrono::steady_clock::now();
    json summary;
    summary["experiment"] = experiment_name(cfg.experiment);
    summary["params"] = params_json(cfg);
    summary["seed"] = cfg.seed;
    summary["results"] = results;
    summary["runtime_s"] =
        std::chrono::duration<double>(stop - start).count();
    return summary;
}

bool all_passed(const json& summary) {
    for (const auto& r : summary.at("results"))
        if (r.contains("pass") && !r.at("pass").get<bool>()) return false;
    return true;
}

}  // namespace airylab
