#pragma once

#include <limits>
#include <vector>

#include "airylab/rng.hpp"

namespace airylab {

// Variance constants of the entry distributions. s_a is the asymptotic
// standard deviation of the diagonal entries, s_xi that of the off-diagonal
// perturbations; they satisfy s_a^2/4 + s_xi^2 = 1/beta. beta may be
// +infinity, in which case both constants are zero (noise off).
struct EnsembleParams {
    double beta;
    double s_a;
    double s_xi;

    static EnsembleParams gaussian(double beta);

    bool noise_free() const { return s_a == 0.0 && s_xi == 0.0; }
    void validate() const;
};

// Symmetric tridiagonal N x N matrix: diag holds a(1..N), offdiag holds
// b(1..N-1).
struct TridiagonalMatrix {
    int n = 0;
    std::vector<double> diag;
    std::vector<double> offdiag;

    double trace() const;
};

// Interval of scaled edge coordinates, always a subset of [0, inf).
struct SpectralWindow {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();

    static SpectralWindow full() { return {}; }

    bool contains(double x) const { return x >= lower && x <= upper; }
    bool is_full() const {
        return lower <= 0.0 && upper == std::numeric_limits<double>::infinity();
    }
    bool is_empty() const { return lower > upper; }
};

constexpr double kBetaInfinity = std::numeric_limits<double>::infinity();

// One draw from the chi distribution with parameter a > 0 (density
// proportional to x^{a-1} e^{-x^2/2}), via the square root of a
// Gamma(a/2, 2) draw.
double sample_chi(double a, RngStream& rng);

// Exact mean of the chi distribution, sqrt(2) Gamma((a+1)/2) / Gamma(a/2),
// evaluated through log-gammas so large parameters are safe.
double chi_mean(double a);

// Gaussian beta-ensemble draw: diagonal i.i.d. N(0, 2/beta), off-diagonal
// entry m distributed as chi_{beta m} / sqrt(beta).
TridiagonalMatrix sample_gaussian_beta(int n, double beta, RngStream& rng);

// Zeroes every entry whose scaled coordinates do not both lie in the window:
// entry (i,j) survives iff (N-i+1/2)/N^{1/3} and (N-j+1/2)/N^{1/3} are in
// the window. The full window is the identity map.
TridiagonalMatrix restrict_to_window(const TridiagonalMatrix& m,
                                     const SpectralWindow& window);

}  // namespace airylab
