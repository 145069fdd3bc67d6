#pragma once

#include <cstdint>
#include <vector>

#include "airylab/ensemble.hpp"
#include "airylab/mc.hpp"

namespace airylab {

struct MomentReport {
    int k = 0;
    McEstimate empirical;
    double predicted = 0.0;
    double z_score = 0.0;
};

struct CovarianceReport {
    double alpha = 1.0;
    double alpha_prime = 1.0;
    int k = 1;
    int k_prime = 1;
    double empirical = 0.0;
    double predicted = 0.0;
    double jackknife_se = 0.0;
    long long n_samples = 0;
};

struct TraceAgreementReport {
    int big_n = 0;
    long long n_matrices = 0;
    McEstimate power_trace;  // Trace M(T, A, N)
    McEstimate exp_trace;    // sum of exp(T lambda_i / 2)
    // Per-matrix |power trace - exponential trace|, the latter taken at the
    // matched time (floor(T N^{2/3}) - 1/2)/N^{2/3} of the half-sum.
    McEstimate abs_diff;
};

// Limiting value of (1/N) Trace (M_N / sqrt(N))^k: the Catalan number
// C_{k/2} for even k, 0 for odd k.
double semicircle_limit_moment(int k);

// Ensemble-averaged (1/N) Trace (M_N / sqrt(N))^k via exact banded power
// traces; k <= 64.
MomentReport empirical_spectral_moment(double beta, int big_n, int k,
                                       long long n_matrices, std::uint64_t seed,
                                       std::uint64_t task_base, int threads);

// Limiting covariance of centered corner traces.
double clt_covariance_predicted(double alpha, double alpha_prime, int k, int k_prime,
                                double s_a, double s_xi);

// Sample covariance of the two centered corner traces (corners cut from the
// same matrix draw), with delete-one jackknife standard error.
CovarianceReport clt_covariance_empirical(double beta, int big_n, double alpha,
                                          double alpha_prime, int k, int k_prime,
                                          long long n_matrices, std::uint64_t seed,
                                          std::uint64_t task_base, int threads);

// One-sample KS p-value against Normal(mu, sigma2); needs >= 100 samples.
double normality_test(const std::vector<double>& samples, double mu, double sigma2);

// Paired comparison of the finite-N power trace and the exponential sum over
// the edge-scaled spectrum.
TraceAgreementReport trace_agreement(double beta, int big_n, double t,
                                     const SpectralWindow& window,
                                     long long n_matrices, std::uint64_t seed,
                                     std::uint64_t task_base, int threads);

}  // namespace airylab
