#include "airylab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "airylab/parallel.hpp"
#include "airylab/spectral.hpp"
#include "airylab/stats.hpp"

namespace airylab {

namespace {

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                               std::lgamma(n - k + 1.0)));
}

}  // namespace

double semicircle_limit_moment(int k) {
    if (k < 1) throw std::invalid_argument("semicircle_limit_moment: k >= 1 required");
    if (k % 2 != 0) return 0.0;
    return binomial(k, k / 2) / (k / 2 + 1.0);
}

MomentReport empirical_spectral_moment(double beta, int big_n, int k,
                                       long long n_matrices, std::uint64_t seed,
                                       std::uint64_t task_base, int threads) {
    if (k < 1 || k > 64)
        throw std::invalid_argument("empirical_spectral_moment: k in [1,64] required");
    const double scale = std::pow(static_cast<double>(big_n), k / 2.0 + 1.0);
    const auto vals = parallel_sample(seed, task_base, n_matrices, threads,
                                      [&](RngStream& rng) {
                                          const auto m = sample_gaussian_beta(big_n, beta, rng);
                                          return small_power_trace(m, k) / scale;
                                      });
    MomentReport rep;
    rep.k = k;
    rep.empirical = accumulate(vals);
    rep.predicted = semicircle_limit_moment(k);
    rep.z_score = (rep.empirical.mean - rep.predicted) / rep.empirical.std_error();
    return rep;
}

double clt_covariance_predicted(double alpha, double alpha_prime, int k, int k_prime,
                                double s_a, double s_xi) {
    if (k < 1 || k_prime < 1)
        throw std::invalid_argument("clt_covariance_predicted: k, k' >= 1 required");
    if (alpha <= 0.0 || alpha > 1.0 || alpha_prime <= 0.0 || alpha_prime > 1.0)
        throw std::invalid_argument("clt_covariance_predicted: alpha in (0,1] required");
    if (k % 2 != k_prime % 2) return 0.0;
    const double common = std::pow(std::min(alpha, alpha_prime), (k + k_prime) / 2.0) *
                          2.0 * k * k_prime / (k + k_prime);
    if (k % 2 == 1)
        return common * s_a * s_a * binomial(k - 1, (k - 1) / 2) *
               binomial(k_prime - 1, (k_prime - 1) / 2);
    return common * s_xi * s_xi * binomial(k, k / 2) * binomial(k_prime, k_prime / 2);
}

CovarianceReport clt_covariance_empirical(double beta, int big_n, double alpha,
                                          double alpha_prime, int k, int k_prime,
                                          long long n_matrices, std::uint64_t seed,
                                          std::uint64_t task_base, int threads) {
    if (k > 64 || k_prime > 64)
        throw std::invalid_argument("clt_covariance_empirical: k, k' <= 64 required");
    if (n_matrices < 2)
        throw std::invalid_argument("clt_covariance_empirical: need >= 2 matrices");
    const int n1 = std::max(1, static_cast<int>(alpha * big_n));
    const int n2 = std::max(1, static_cast<int>(alpha_prime * big_n));
    const double sqrt_n = std::sqrt(static_cast<double>(big_n));

    std::vector<double> xs(n_matrices), ys(n_matrices);
    parallel_tasks(n_matrices, threads, [&](long long i) {
        RngStream rng(seed, task_base + static_cast<std::uint64_t>(i));
        const auto m = sample_gaussian_beta(big_n, beta, rng);
        TridiagonalMatrix c1{n1,
                             std::vector<double>(m.diag.begin(), m.diag.begin() + n1),
                             std::vector<double>(m.offdiag.begin(), m.offdiag.begin() + (n1 - 1))};
        TridiagonalMatrix c2{n2,
                             std::vector<double>(m.diag.begin(), m.diag.begin() + n2),
                             std::vector<double>(m.offdiag.begin(), m.offdiag.begin() + (n2 - 1))};
        xs[i] = small_power_trace(c1, k) / std::pow(sqrt_n, k);
        ys[i] = small_power_trace(c2, k_prime) / std::pow(sqrt_n, k_prime);
    });

    const double n = static_cast<double>(n_matrices);
    double mx = 0.0, my = 0.0;
    for (long long i = 0; i < n_matrices; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    for (long long i = 0; i < n_matrices; ++i) sxy += (xs[i] - mx) * (ys[i] - my);
    const double cov = sxy / (n - 1.0);

    // Delete-one jackknife of the sample covariance.
    double jsum = 0.0, jsum2 = 0.0;
    for (long long i = 0; i < n_matrices; ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        const double mx_i = mx - dx / (n - 1.0);
        const double my_i = my - dy / (n - 1.0);
        const double sxy_i = sxy - dx * dy - (n - 1.0) * (mx - mx_i) * (my - my_i);
        const double cov_i = sxy_i / (n - 2.0);
        jsum += cov_i;
        jsum2 += cov_i * cov_i;
    }
    const double jmean = jsum / n;
    const double jvar = (n - 1.0) / n * (jsum2 - n * jmean * jmean);

    CovarianceReport rep;
    rep.alpha = alpha;
    rep.alpha_prime = alpha_prime;
    rep.k = k;
    rep.k_prime = k_prime;
    rep.empirical = cov;
    const auto params = EnsembleParams::gaussian(beta);
    rep.predicted = clt_covariance_predicted(alpha, alpha_prime, k, k_prime,
                                             params.s_a, params.s_xi);
    rep.jackknife_se = std::sqrt(std::max(0.0, jvar));
    rep.n_samples = n_matrices;
    return rep;
}

double normality_test(const std::vector<double>& samples, double mu, double sigma2) {
    if (samples.size() < 100)
        throw std::invalid_argument("normality_test: need >= 100 samples");
    if (sigma2 <= 0.0)
        throw std::invalid_argument("normality_test: sigma2 > 0 required");
    return ks_one_sample(samples, [mu, sigma2](double x) {
               return normal_cdf(x, mu, sigma2);
           }).p_value;
}

TraceAgreementReport trace_agreement(double beta, int big_n, double t,
                                     const SpectralWindow& window,
                                     long long n_matrices, std::uint64_t seed,
                                     std::uint64_t task_base, int threads) {
    if (power_step_count(big_n, t) < 2.0)
        throw std::invalid_argument("trace_agreement: floor(t N^{2/3}) >= 2 required");
    // The half-sum of the k-th and (k-1)-st powers is the semigroup at the
    // matched time (k - 1/2)/N^{2/3}, and the convergence statement is along
    // such matched sequences. Pairing the exponential trace at t instead
    // mixes in a floor(t N^{2/3}) offset whose size depends on the fractional
    // part of t N^{2/3} and is not monotone in N.
    const double n23 = std::cbrt(big_n) * std::cbrt(big_n);
    const double t_matched = (power_step_count(big_n, t) - 0.5) / n23;
    std::vector<double> pw(n_matrices), ex(n_matrices), paired(n_matrices);
    parallel_tasks(n_matrices, threads, [&](long long i) {
        RngStream rng(seed, task_base + static_cast<std::uint64_t>(i));
        auto m = sample_gaussian_beta(big_n, beta, rng);
        m = restrict_to_window(m, window);
        const auto eig = eigen_tridiagonal(m, false);
        const auto edge = edge_spectrum(eig, big_n);
        pw[i] = scaled_power_trace(eig, big_n, t);
        ex[i] = exp_edge_trace(edge, t);
        paired[i] = exp_edge_trace(edge, t_matched);
    });
    TraceAgreementReport rep;
    rep.big_n = big_n;
    rep.n_matrices = n_matrices;
    for (long long i = 0; i < n_matrices; ++i) {
        rep.power_trace.add(pw[i]);
        rep.exp_trace.add(ex[i]);
        rep.abs_diff.add(std::abs(pw[i] - paired[i]));
    }
    return rep;
}

}  // namespace airylab
