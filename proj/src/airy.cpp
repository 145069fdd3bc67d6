#include "airylab/airy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace airylab {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct PathWeight {
    double value = 0.0;  // survival * exp(-I/2 + noise terms) * parity factor
    bool clipped = false;
};

// Probability that the continuum bridge stays inside the window given its
// grid values: product over cells of the exact one-sided barrier-crossing
// probabilities. Returns 0 if any grid value leaves the window.
double window_survival(const std::vector<double>& v, double dt,
                       const SpectralWindow& window) {
    const double lo = window.lower;
    const double up = window.upper;
    const bool has_up = std::isfinite(up);
    for (double x : v)
        if (x < lo || (has_up && x > up)) return 0.0;
    double log_surv = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const double a = v[i] - lo;
        const double b = v[i + 1] - lo;
        const double p_lo = -std::expm1(-2.0 * a * b / dt);
        if (p_lo <= 0.0) return 0.0;
        log_surv += std::log(p_lo);
        if (has_up) {
            const double au = up - v[i];
            const double bu = up - v[i + 1];
            const double p_up = -std::expm1(-2.0 * au * bu / dt);
            if (p_up <= 0.0) return 0.0;
            log_surv += std::log(p_up);
        }
    }
    return std::exp(log_surv);
}

double trapezoid_integral(const std::vector<double>& v, double dt) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) s += 0.5 * (v[i] + v[i + 1]) * dt;
    return s;
}

PathWeight path_weight(const ContinuumPath& path, const SpectralWindow& window,
                       const EnsembleParams& params, const WhiteNoiseGrid& w,
                       Parity parity) {
    PathWeight out;
    const double dt = path.dt();
    const double survival = window_survival(path.values, dt, window);
    if (survival == 0.0) return out;
    const double exponent_base = -0.5 * trapezoid_integral(path.values, dt);

    if (params.noise_free()) {
        if (parity == Parity::odd) return out;  // sinh(0) = 0
        out.value = survival * std::exp(exponent_base);
        return out;
    }

    const auto prof = local_time_profile(path, w.delta_a);
    const long long offset = std::llround(prof.level0 / w.delta_a);
    double s_xi_sum = 0.0, s_a_sum = 0.0;
    for (std::size_t j = 0; j < prof.values.size(); ++j) {
        const long long idx = offset + static_cast<long long>(j);
        if (idx < 0) continue;
        if (idx >= w.size()) {
            if (prof.values[j] > 0.0) out.clipped = true;
            continue;
        }
        s_xi_sum += prof.values[j] * w.incr_xi[idx];
        s_a_sum += prof.values[j] * w.incr_a[idx];
    }
    const double base = survival * std::exp(exponent_base + params.s_xi * s_xi_sum);
    const double arg = 0.5 * params.s_a * s_a_sum;
    switch (parity) {
        case Parity::both: out.value = base * std::exp(arg); break;
        case Parity::even: out.value = base * std::cosh(arg); break;
        case Parity::odd: out.value = base * std::sinh(arg); break;
    }
    return out;
}

McEstimate zero_estimate(long long n) {
    McEstimate e;
    e.count = n;
    return e;
}

}  // namespace

int PathGrid::steps_for(double t) const {
    return std::max(8, static_cast<int>(std::llround(steps_per_unit * t)));
}

QuadratureSpec QuadratureSpec::for_time(double t) {
    QuadratureSpec q;
    // The diagonal kernel decays like e^{-t x / 2}, so the cutoff must scale
    // with 1/t for the truncated tail to stay below 1e-4 of the total.
    q.x_max = 20.0 * std::max(1.0, std::sqrt(t));
    q.n_intervals = 2 * static_cast<int>(std::ceil(q.x_max / 0.25 / 2.0));
    return q;
}

WhiteNoiseGrid sample_white_noise(double delta_a, double a_max, RngStream& rng) {
    if (!(delta_a > 0.0) || !(a_max > 0.0))
        throw std::invalid_argument("sample_white_noise: delta_a and a_max must be positive");
    WhiteNoiseGrid w;
    w.delta_a = delta_a;
    w.a_max = a_max;
    const int n = static_cast<int>(std::ceil(a_max / delta_a));
    const double sd = std::sqrt(delta_a);
    w.incr_xi.resize(n);
    w.incr_a.resize(n);
    for (int i = 0; i < n; ++i) w.incr_xi[i] = sd * rng.normal();
    for (int i = 0; i < n; ++i) w.incr_a[i] = sd * rng.normal();
    return w;
}

KernelResult kernel_mc(const KernelQuery& q, const EnsembleParams& params,
                       const WhiteNoiseGrid& w, int n_paths, const PathGrid& grid,
                       RngStream& rng) {
    if (!(q.t > 0.0)) throw std::invalid_argument("kernel_mc: t must be positive");
    if (q.x < 0.0 || q.y < 0.0) throw std::invalid_argument("kernel_mc: x, y must be >= 0");
    KernelResult out;
    if (!q.window.contains(q.x) || !q.window.contains(q.y)) {
        out.est = zero_estimate(n_paths);
        return out;
    }
    const int n_steps = grid.steps_for(q.t);
    const double prefactor =
        std::exp(-(q.x - q.y) * (q.x - q.y) / (2.0 * q.t)) / std::sqrt(2.0 * kPi * q.t);
    for (int p = 0; p < n_paths; ++p) {
        ContinuumPath path = sample_brownian_bridge(q.x, q.y, q.t, n_steps, rng);
        const PathWeight w1 = path_weight(path, q.window, params, w, q.parity);
        // Antithetic partner: reflection about the chord.
        const int n = path.n_grid();
        for (int i = 0; i <= n; ++i) {
            const double chord = q.x + (q.y - q.x) * i / n;
            path.values[i] = 2.0 * chord - path.values[i];
        }
        const PathWeight w2 = path_weight(path, q.window, params, w, q.parity);
        out.est.add(prefactor * 0.5 * (w1.value + w2.value));
        if (w1.clipped || w2.clipped) ++out.clipped;
    }
    return out;
}

McEstimate kernel_mc_wavg(double x, double y, double t, const SpectralWindow& window,
                          double beta, int n_paths, const PathGrid& grid,
                          RngStream& rng) {
    if (!(t > 0.0)) throw std::invalid_argument("kernel_mc_wavg: t must be positive");
    if (!(beta > 0.0)) throw std::invalid_argument("kernel_mc_wavg: beta must be positive");
    if (!window.contains(x) || !window.contains(y)) return zero_estimate(n_paths);
    const int n_steps = grid.steps_for(t);
    const double dt = t / n_steps;
    const double prefactor =
        std::exp(-(x - y) * (x - y) / (2.0 * t)) / std::sqrt(2.0 * kPi * t);
    const double half_inv_beta = (beta == kBetaInfinity) ? 0.0 : 0.5 / beta;
    // Level bin width reused from the default white-noise grid spacing.
    const double delta = 1.0 / 64.0;
    McEstimate est;
    for (int p = 0; p < n_paths; ++p) {
        ContinuumPath path = sample_brownian_bridge(x, y, t, n_steps, rng);
        double pair_sum = 0.0;
        for (int half = 0; half < 2; ++half) {
            if (half == 1) {
                const int n = path.n_grid();
                for (int i = 0; i <= n; ++i) {
                    const double chord = x + (y - x) * i / n;
                    path.values[i] = 2.0 * chord - path.values[i];
                }
            }
            const double survival = window_survival(path.values, dt, window);
            if (survival == 0.0) continue;
            double exponent = -0.5 * trapezoid_integral(path.values, dt);
            if (half_inv_beta > 0.0) {
                const auto prof = local_time_profile(path, delta);
                double l2 = binned_l2_correction(delta, t);
                for (double v : prof.values) l2 += v * v * delta;
                exponent += half_inv_beta * l2;
            }
            pair_sum += survival * std::exp(exponent);
        }
        est.add(prefactor * 0.5 * pair_sum);
    }
    return est;
}

namespace {

std::vector<double> simpson_weights(int n_intervals, double h) {
    std::vector<double> w(n_intervals + 1, 0.0);
    for (int i = 0; i <= n_intervals; ++i) {
        double c = (i == 0 || i == n_intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        w[i] = c * h / 3.0;
    }
    return w;
}

}  // namespace

KernelResult trace_mc(double t, const SpectralWindow& window,
                      const EnsembleParams& params, const WhiteNoiseGrid& w,
                      int n_paths, const QuadratureSpec& quad, const PathGrid& grid,
                      RngStream& rng) {
    if (quad.n_intervals < 2 || quad.n_intervals % 2 != 0)
        throw std::invalid_argument("trace_mc: n_intervals must be even and >= 2");
    KernelResult out;
    if (window.is_empty()) {
        out.est = zero_estimate(n_paths);
        return out;
    }
    const double h = quad.x_max / quad.n_intervals;
    const auto weights = simpson_weights(quad.n_intervals, h);
    double mean = 0.0, var = 0.0;
    for (int i = 0; i <= quad.n_intervals; ++i) {
        KernelQuery q;
        q.x = q.y = i * h;
        q.t = t;
        q.window = window;
        const KernelResult node = kernel_mc(q, params, w, n_paths, grid, rng);
        mean += weights[i] * node.est.mean;
        const double se = node.est.std_error();
        var += weights[i] * weights[i] * se * se;
        out.clipped += node.clipped;
    }
    out.est = McEstimate::from_summary(mean, std::sqrt(var), n_paths);
    return out;
}

McEstimate trace_wavg(double t, const SpectralWindow& window, double beta,
                      int n_paths, const QuadratureSpec& quad, const PathGrid& grid,
                      RngStream& rng) {
    if (quad.n_intervals < 2 || quad.n_intervals % 2 != 0)
        throw std::invalid_argument("trace_wavg: n_intervals must be even and >= 2");
    if (window.is_empty()) return zero_estimate(n_paths);
    const double h = quad.x_max / quad.n_intervals;
    const auto weights = simpson_weights(quad.n_intervals, h);
    double mean = 0.0, var = 0.0;
    for (int i = 0; i <= quad.n_intervals; ++i) {
        const McEstimate node =
            kernel_mc_wavg(i * h, i * h, t, window, beta, n_paths, grid, rng);
        mean += weights[i] * node.mean;
        const double se = node.std_error();
        var += weights[i] * weights[i] * se * se;
    }
    return McEstimate::from_summary(mean, std::sqrt(var), n_paths);
}

double trace_excursion_sample(double t, double beta, int n_grid, double delta,
                              RngStream& rng) {
    const ContinuumPath e = sample_excursion(n_grid, rng);
    const auto [area, raw_l2] = area_and_l2(e, delta);
    const double l2 = raw_l2 + binned_l2_correction(delta, 1.0);
    const double t32 = std::pow(t, 1.5);
    double exponent = -0.5 * t32 * area;
    if (beta != kBetaInfinity) exponent += t32 / (2.0 * beta) * l2;
    return std::sqrt(2.0 / kPi) * std::pow(t, -1.5) * std::exp(exponent);
}

McEstimate expected_trace_excursion(double t, double beta, long long n_samples,
                                    int n_grid, double delta, RngStream& rng) {
    if (!(t > 0.0)) throw std::invalid_argument("expected_trace_excursion: t must be positive");
    if (!(beta > 0.0)) throw std::invalid_argument("expected_trace_excursion: beta must be positive");
    McEstimate est;
    for (long long i = 0; i < n_samples; ++i)
        est.add(trace_excursion_sample(t, beta, n_grid, delta, rng));
    return est;
}

double gaussian_identity_one(int n_grid, double delta, RngStream& rng) {
    const ContinuumPath e = sample_excursion(n_grid, rng);
    const auto [area, l2] = area_and_l2(e, delta);
    return area - 0.5 * (l2 + binned_l2_correction(delta, 1.0));
}

std::vector<double> gaussian_identity_sample(long long n_samples, int n_grid,
                                             double delta, RngStream& rng) {
    std::vector<double> out;
    out.reserve(n_samples);
    for (long long i = 0; i < n_samples; ++i)
        out.push_back(gaussian_identity_one(n_grid, delta, rng));
    return out;
}

SemigroupCheck semigroup_residual(double t1, double t2, const SpectralWindow& window,
                                  const EnsembleParams& params, const WhiteNoiseGrid& w,
                                  int n_paths, const std::vector<double>& test_points,
                                  const QuadratureSpec& z_quad, const PathGrid& grid,
                                  RngStream& rng) {
    if (!(t1 > 0.0) || t2 < 0.0)
        throw std::invalid_argument("semigroup_residual: need t1 > 0 and t2 >= 0");
    const int np = static_cast<int>(test_points.size());
    SemigroupCheck out;

    auto kernel_at = [&](double x, double y, double t) {
        KernelQuery q;
        q.x = x;
        q.y = y;
        q.t = t;
        q.window = window;
        KernelResult r = kernel_mc(q, params, w, n_paths, grid, rng);
        out.clipped += r.clipped;
        return r.est;
    };

    // Direct estimates of K(x, y; T1 + T2).
    std::vector<std::vector<McEstimate>> direct(np, std::vector<McEstimate>(np));
    for (int i = 0; i < np; ++i)
        for (int j = 0; j < np; ++j)
            direct[i][j] = kernel_at(test_points[i], test_points[j], t1 + t2);

    std::vector<std::vector<double>> comp(np, std::vector<double>(np, 0.0));
    std::vector<std::vector<double>> comp_var(np, std::vector<double>(np, 0.0));
    if (t2 == 0.0) {
        // U(0) is the projector onto the window: the composition reduces to an
        // independent re-estimate of the same kernel.
        for (int i = 0; i < np; ++i)
            for (int j = 0; j < np; ++j) {
                const McEstimate again = kernel_at(test_points[i], test_points[j], t1);
                comp[i][j] = again.mean;
                const double se = again.std_error();
                comp_var[i][j] = se * se;
            }
    } else {
        const double hz = z_quad.x_max / z_quad.n_intervals;
        const auto wz = simpson_weights(z_quad.n_intervals, hz);
        const int nz = z_quad.n_intervals + 1;
        std::vector<std::vector<McEstimate>> k1(np, std::vector<McEstimate>(nz));
        std::vector<std::vector<McEstimate>> k2(nz, std::vector<McEstimate>(np));
        for (int i = 0; i < np; ++i)
            for (int z = 0; z < nz; ++z) k1[i][z] = kernel_at(test_points[i], z * hz, t1);
        for (int z = 0; z < nz; ++z)
            for (int j = 0; j < np; ++j) k2[z][j] = kernel_at(z * hz, test_points[j], t2);
        for (int i = 0; i < np; ++i)
            for (int j = 0; j < np; ++j) {
                double acc = 0.0, var = 0.0;
                for (int z = 0; z < nz; ++z) {
                    const double a = k1[i][z].mean;
                    const double b = k2[z][j].mean;
                    const double sa = k1[i][z].std_error();
                    const double sb = k2[z][j].std_error();
                    acc += wz[z] * a * b;
                    var += wz[z] * wz[z] * (a * a * sb * sb + b * b * sa * sa + sa * sa * sb * sb);
                }
                comp[i][j] = acc;
                comp_var[i][j] = var;
            }
    }

    for (int i = 0; i < np; ++i)
        for (int j = 0; j < np; ++j) {
            const double resid = std::abs(comp[i][j] - direct[i][j].mean);
            const double sed = direct[i][j].std_error();
            const double se = std::sqrt(comp_var[i][j] + sed * sed);
            const double z = (se > 0.0) ? resid / se : (resid > 0.0 ? 1e300 : 0.0);
            if (resid > out.max_residual) {
                out.max_residual = resid;
                out.se_at_max = se;
            }
            out.max_z = std::max(out.max_z, z);
        }
    return out;
}

double okounkov_expected_trace(double t) {
    return std::sqrt(2.0 / kPi) * std::pow(t, -1.5) * std::exp(t * t * t / 96.0);
}

}  // namespace airylab
