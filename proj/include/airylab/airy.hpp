#pragma once

#include <utility>
#include <vector>

#include "airylab/ensemble.hpp"
#include "airylab/mc.hpp"
#include "airylab/paths.hpp"
#include "airylab/rng.hpp"

namespace airylab {

// Increments of the two independent driving Brownian motions on the level
// grid a_j = [j*delta_a, (j+1)*delta_a). The combined motion
// W = sqrt(beta) (s_xi W_xi + (s_a/2) W_a) is standard under
// s_a^2/4 + s_xi^2 = 1/beta.
struct WhiteNoiseGrid {
    double delta_a = 0.0;
    double a_max = 0.0;
    std::vector<double> incr_xi;
    std::vector<double> incr_a;

    int size() const { return static_cast<int>(incr_xi.size()); }
};

enum class Parity { both, even, odd };

struct KernelQuery {
    double x = 0.0;
    double y = 0.0;
    double t = 1.0;
    SpectralWindow window = SpectralWindow::full();
    Parity parity = Parity::both;
};

struct KernelResult {
    McEstimate est;
    long long clipped = 0;  // paths whose maximum exceeded a_max
};

// Time-grid resolution for bridge paths: steps per unit time.
struct PathGrid {
    int steps_per_unit = 4096;

    int steps_for(double t) const;
};

// Composite-Simpson spec for the diagonal trace integral over [0, x_max].
struct QuadratureSpec {
    double x_max = 20.0;
    int n_intervals = 32;  // must be even

    static QuadratureSpec for_time(double t);
};

WhiteNoiseGrid sample_white_noise(double delta_a, double a_max, RngStream& rng);

// Monte Carlo estimate of the kernel K_A(x, y; T) conditional on the given
// noise path: per bridge, the indicator of staying in the window (grid check
// plus exact per-cell barrier-crossing correction), the trapezoidal integral
// of the path, and grid sums of binned local times against the noise
// increments. Antithetic bridge pairs (reflection about the chord) are
// averaged into one sample.
KernelResult kernel_mc(const KernelQuery& q, const EnsembleParams& params,
                       const WhiteNoiseGrid& w, int n_paths, const PathGrid& grid,
                       RngStream& rng);

// Kernel with the noise averaged out analytically: per-path weight
// exp(-1/2 int B + (1/2 beta) int L^2). beta may be infinite (weight
// exp(-1/2 int B) only).
McEstimate kernel_mc_wavg(double x, double y, double t, const SpectralWindow& window,
                          double beta, int n_paths, const PathGrid& grid,
                          RngStream& rng);

// Trace of U_A(T) for one noise realization: composite Simpson of
// kernel_mc along the diagonal, all nodes sharing the same noise path.
KernelResult trace_mc(double t, const SpectralWindow& window,
                      const EnsembleParams& params, const WhiteNoiseGrid& w,
                      int n_paths, const QuadratureSpec& quad, const PathGrid& grid,
                      RngStream& rng);

// W-averaged trace along the diagonal (companion diagnostic to trace_mc).
McEstimate trace_wavg(double t, const SpectralWindow& window, double beta,
                      int n_paths, const QuadratureSpec& quad, const PathGrid& grid,
                      RngStream& rng);

// One sample of sqrt(2/pi) T^{-3/2} exp(-T^{3/2}/2 int e + T^{3/2}/(2 beta) int l^2)
// from a fresh excursion.
double trace_excursion_sample(double t, double beta, int n_grid, double delta,
                              RngStream& rng);

// Expected trace through the excursion representation.
McEstimate expected_trace_excursion(double t, double beta, long long n_samples,
                                    int n_grid, double delta, RngStream& rng);

// One sample of int_0^1 e dt - 1/2 int l_y^2 dy.
double gaussian_identity_one(int n_grid, double delta, RngStream& rng);

std::vector<double> gaussian_identity_sample(long long n_samples, int n_grid,
                                             double delta, RngStream& rng);

struct SemigroupCheck {
    double max_residual = 0.0;
    double se_at_max = 0.0;
    double max_z = 0.0;  // max over the test grid of |residual| / combined SE
    long long clipped = 0;
};

// Max over a test grid of |int K(x,z;T1) K(z,y;T2) dz - K(x,y;T1+T2)| with
// all kernels estimated on the same noise path. T2 = 0 compares two
// independent estimates of K(x,y;T1) (U(0) is the projector).
SemigroupCheck semigroup_residual(double t1, double t2, const SpectralWindow& window,
                                  const EnsembleParams& params, const WhiteNoiseGrid& w,
                                  int n_paths, const std::vector<double>& test_points,
                                  const QuadratureSpec& z_quad, const PathGrid& grid,
                                  RngStream& rng);

// Closed form sqrt(2/pi) T^{-3/2} e^{T^3/96} for the expected trace at beta = 2.
double okounkov_expected_trace(double t);

}  // namespace airylab
