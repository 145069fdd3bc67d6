#pragma once

#include <map>
#include <utility>
#include <vector>

#include "airylab/rng.hpp"

namespace airylab {

// +-1 step trajectory on the integers with fixed start.
struct LatticePath {
    int start = 0;
    std::vector<int> steps;  // each +1 or -1

    int length() const { return static_cast<int>(steps.size()); }
    int end() const;
    std::vector<int> positions() const;  // X(0..L)
};

// Visit counts by level over indices t = 0..L. The N^{1/3} normalization of
// the paper's occupation times is applied on read.
struct OccupationProfile {
    int big_n = 1;
    std::map<int, long long> counts;

    double normalized(int level) const;
};

// Up/down step counts by origin level. `above[h]` is the total number of
// steps originating from levels strictly higher than h.
struct UpDownCounts {
    std::map<int, long long> up;
    std::map<int, long long> down;
    std::map<int, long long> above;
};

// Path sampled at uniform times on [0, t_max]; values has n_grid + 1 entries.
struct ContinuumPath {
    double t_max = 1.0;
    std::vector<double> values;

    int n_grid() const { return static_cast<int>(values.size()) - 1; }
    double dt() const { return t_max / n_grid(); }
};

// Binned occupation density: values[j] estimates the local time on
// [level0 + j*delta, level0 + (j+1)*delta).
struct LocalTimeProfile {
    double delta = 0.0;
    double level0 = 0.0;
    std::vector<double> values;

    double level(int j) const { return level0 + j * delta; }
};

// Uniform random +-1 bridge via sequential conditioning:
// P(up | position v, r steps left) = (r + end - v) / (2r). Requires
// n_steps >= |end - start| with matching parity.
LatticePath sample_rw_bridge(int start, int end, int n_steps, RngStream& rng);

OccupationProfile occupation_profile(const LatticePath& path, int big_n = 1);

// Increments reordered by (origin level, then chronological order); output
// starts at 0.
LatticePath quantile_transform(const LatticePath& path);

// Cyclic shift at the first global minimum, re-rooted at 0. A path whose
// minimum is attained at t = 0 only is returned unchanged (up to the root
// shift).
LatticePath vervaat_transform(const LatticePath& path);

UpDownCounts updown_counts(const LatticePath& path);

// Normalized bridge count Xi(x, y; N, t_tilde) =
// N^{1/3} 2^{-k} C(k, (k + delta)/2) with k = t_tilde N^{2/3} and delta the
// difference of the lattice endpoints floor(N - N^{1/3} y) - floor(N - N^{1/3} x),
// evaluated through log-gammas. Returns 0 when |delta| > k.
double bridge_count_xi(double x, double y, long long big_n, double t_tilde);

// Brownian bridge from x at 0 to y at t_max with exact Gaussian marginals at
// the grid times (sequential conditioning).
ContinuumPath sample_brownian_bridge(double x, double y, double t_max, int n_grid,
                                     RngStream& rng);

// Standard Brownian excursion on [0,1] with exact marginals at the grid
// times (radial part of a three-dimensional Brownian bridge).
ContinuumPath sample_excursion(int n_grid, RngStream& rng);

// Grid Vervaat transform of a sampled 0->0 bridge: cyclic shift at the first
// grid argmin, minus the grid minimum. Carries an O(sqrt(dt)) minimum
// deficit, so sample_excursion does not use it; kept as the path-transform
// route and cross-checked distributionally in tests.
ContinuumPath vervaat_excursion(int n_grid, RngStream& rng);

// Occupation density binned at width delta, treating the path as linear
// between grid points and splitting each interval's duration across the
// level bins it crosses. Conserves total time exactly.
LocalTimeProfile local_time_profile(const ContinuumPath& path, double delta);

// (trapezoidal integral of the path, sum of squared binned local times * delta).
std::pair<double, double> area_and_l2(const ContinuumPath& path, double delta);

// Leading bias of the binned squared-local-time integral for Brownian-type
// paths: within a level bin the local time fluctuates with quadratic
// variation rate 4 l_y (Ray-Knight), so bin-averaging loses
// (2/3) delta * integral of l = (2/3) delta * t_max in expectation. Adding
// this back makes the binned estimator accurate to o(delta).
double binned_l2_correction(double delta, double t_max);

}  // namespace airylab
