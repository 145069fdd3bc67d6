#include "airylab/ensemble.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace airylab {

EnsembleParams EnsembleParams::gaussian(double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("EnsembleParams: beta must be positive");
    if (beta == kBetaInfinity) return {beta, 0.0, 0.0};
    const double s_xi = 1.0 / std::sqrt(2.0 * beta);
    return {beta, 2.0 * s_xi, s_xi};
}

void EnsembleParams::validate() const {
    if (!(beta > 0.0)) throw std::invalid_argument("EnsembleParams: beta must be positive");
    if (s_a < 0.0 || s_xi < 0.0)
        throw std::invalid_argument("EnsembleParams: variance constants must be nonnegative");
    const double lhs = 0.25 * s_a * s_a + s_xi * s_xi;
    const double rhs = (beta == kBetaInfinity) ? 0.0 : 1.0 / beta;
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    if (std::abs(lhs - rhs) > 1e-12 * scale)
        throw std::invalid_argument("EnsembleParams: s_a^2/4 + s_xi^2 must equal 1/beta");
}

double TridiagonalMatrix::trace() const {
    return std::accumulate(diag.begin(), diag.end(), 0.0);
}

double sample_chi(double a, RngStream& rng) {
    if (!(a > 0.0)) throw std::invalid_argument("sample_chi: parameter must be positive");
    return std::sqrt(2.0 * rng.gamma(0.5 * a));
}

double chi_mean(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("chi_mean: parameter must be positive");
    return std::sqrt(2.0) * std::exp(std::lgamma(0.5 * (a + 1.0)) - std::lgamma(0.5 * a));
}

TridiagonalMatrix sample_gaussian_beta(int n, double beta, RngStream& rng) {
    if (n < 1) throw std::invalid_argument("sample_gaussian_beta: n must be >= 1");
    if (!(beta > 0.0) || beta == kBetaInfinity)
        throw std::invalid_argument("sample_gaussian_beta: beta must be positive and finite");
    TridiagonalMatrix m;
    m.n = n;
    m.diag.resize(n);
    m.offdiag.resize(n - 1);
    const double diag_sd = std::sqrt(2.0 / beta);
    const double inv_sqrt_beta = 1.0 / std::sqrt(beta);
    for (int i = 0; i < n; ++i) m.diag[i] = diag_sd * rng.normal();
    for (int i = 0; i < n - 1; ++i)
        m.offdiag[i] = inv_sqrt_beta * sample_chi(beta * (i + 1), rng);
    return m;
}

TridiagonalMatrix restrict_to_window(const TridiagonalMatrix& m,
                                     const SpectralWindow& window) {
    if (window.is_full()) return m;
    TridiagonalMatrix out = m;
    const double n13 = std::cbrt(static_cast<double>(m.n));
    auto in_window = [&](int i) {  // i is 1-based
        return window.contains((m.n - i + 0.5) / n13);
    };
    for (int i = 1; i <= m.n; ++i)
        if (!in_window(i)) out.diag[i - 1] = 0.0;
    for (int i = 1; i <= m.n - 1; ++i)
        if (!in_window(i) || !in_window(i + 1)) out.offdiag[i - 1] = 0.0;
    return out;
}

}  // namespace airylab
