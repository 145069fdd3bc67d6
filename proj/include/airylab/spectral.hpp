#pragma once

#include <functional>
#include <vector>

#include "airylab/ensemble.hpp"

namespace airylab {

// Full spectrum of a symmetric tridiagonal matrix, eigenvalues sorted
// descending. When eigenvectors are requested, column j of `vectors`
// (stored column-major) is the unit eigenvector of values[j].
struct EigenDecomposition {
    int n = 0;
    std::vector<double> values;
    std::vector<double> vectors;  // empty unless requested; n*n column-major
    bool has_vectors() const { return !vectors.empty(); }
    double vector(int i, int j) const { return vectors[i + static_cast<std::size_t>(j) * n]; }
};

// Edge-scaled spectrum: lambda_i = N^{1/6} (mu_i - 2 sqrt(N)), descending.
struct EdgeSpectrum {
    int n = 0;
    std::vector<double> scaled;
};

// The vector pi_N f: component i (1-based) is
// N^{1/6} * integral of f over [N^{-1/3}(N-i), N^{-1/3}(N-i+1)].
struct GridFunction {
    int n = 0;
    std::vector<double> values;
};

// Implicit-shift QL with Wilkinson shifts; eigenvectors accumulated during
// the sweeps when requested. Throws on non-convergence (50 sweeps per
// eigenvalue).
EigenDecomposition eigen_tridiagonal(const TridiagonalMatrix& m, bool want_vectors);

// Trace of (1/2) [ (M/2sqrt(N))^k + (M/2sqrt(N))^{k-1} ] with
// k = floor(t * N^{2/3}), from a precomputed spectrum. Powers are taken in
// the log-magnitude domain with explicit sign tracking.
double scaled_power_trace(const EigenDecomposition& eig, int big_n, double t);

// Same half-sum of scaled powers for a single eigenvalue ratio r = mu/2sqrt(N).
double scaled_power_pair(double ratio, long long k);

double power_step_count(int big_n, double t);  // floor(t * N^{2/3}) as double

EdgeSpectrum edge_spectrum(const EigenDecomposition& eig, int big_n);

// Sum of exp(t * lambda_i / 2) over the edge-scaled spectrum.
double exp_edge_trace(const EdgeSpectrum& edge, double t);

// pi_N f by adaptive Gauss-Legendre quadrature per cell (1e-10 relative).
GridFunction project_function(const std::function<double(double)>& f, int big_n);

// (pi_N f)' M(T, A, N) (pi_N g) through the eigendecomposition (vectors
// required).
double bilinear_form(const EigenDecomposition& eig, int big_n, double t,
                     const GridFunction& f, const GridFunction& g);

// Exact Trace(M^k) by banded multiplication, k <= 64; no eigensolve.
double small_power_trace(const TridiagonalMatrix& m, int k);

}  // namespace airylab
