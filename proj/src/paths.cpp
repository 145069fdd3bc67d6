#include "airylab/paths.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace airylab {

int LatticePath::end() const {
    return start + std::accumulate(steps.begin(), steps.end(), 0);
}

std::vector<int> LatticePath::positions() const {
    std::vector<int> pos(steps.size() + 1);
    pos[0] = start;
    for (std::size_t l = 0; l < steps.size(); ++l) pos[l + 1] = pos[l] + steps[l];
    return pos;
}

double OccupationProfile::normalized(int level) const {
    const auto it = counts.find(level);
    if (it == counts.end()) return 0.0;
    return static_cast<double>(it->second) / std::cbrt(static_cast<double>(big_n));
}

LatticePath sample_rw_bridge(int start, int end, int n_steps, RngStream& rng) {
    const int diff = end - start;
    if (n_steps < std::abs(diff) || ((n_steps - diff) % 2 != 0))
        throw std::invalid_argument("sample_rw_bridge: endpoints unreachable in n_steps");
    LatticePath path;
    path.start = start;
    path.steps.reserve(n_steps);
    int v = start;
    for (int r = n_steps; r >= 1; --r) {
        const double p_up = static_cast<double>(r + end - v) / (2.0 * r);
        const int s = (rng.uniform() < p_up) ? 1 : -1;
        path.steps.push_back(s);
        v += s;
    }
    return path;
}

OccupationProfile occupation_profile(const LatticePath& path, int big_n) {
    OccupationProfile prof;
    prof.big_n = big_n;
    int v = path.start;
    ++prof.counts[v];
    for (int s : path.steps) {
        v += s;
        ++prof.counts[v];
    }
    return prof;
}

LatticePath quantile_transform(const LatticePath& path) {
    const auto pos = path.positions();
    const int n = path.length();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    // Stable sort by origin level keeps the chronological order within a level.
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return pos[a] < pos[b]; });
    LatticePath out;
    out.start = 0;
    out.steps.resize(n);
    for (int l = 0; l < n; ++l) out.steps[l] = path.steps[order[l]];
    return out;
}

LatticePath vervaat_transform(const LatticePath& path) {
    const auto pos = path.positions();
    const int n = path.length();
    const auto min_it = std::min_element(pos.begin(), pos.end());
    const int argmin = static_cast<int>(min_it - pos.begin());
    LatticePath out;
    out.start = 0;
    if (argmin == 0) {
        out.steps = path.steps;
        return out;
    }
    out.steps.resize(n);
    for (int l = 0; l < n; ++l) out.steps[l] = path.steps[(l + argmin) % n];
    return out;
}

UpDownCounts updown_counts(const LatticePath& path) {
    UpDownCounts c;
    const auto pos = path.positions();
    std::map<int, long long> total;
    for (int l = 0; l < path.length(); ++l) {
        const int origin = pos[l];
        if (path.steps[l] > 0)
            ++c.up[origin];
        else
            ++c.down[origin];
        ++total[origin];
    }
    if (total.empty()) return c;
    const int lo = total.begin()->first - 1;
    const int hi = total.rbegin()->first;
    long long acc = 0;
    for (int h = hi; h >= lo; --h) {
        c.above[h] = acc;
        const auto it = total.find(h);
        if (it != total.end()) acc += it->second;
    }
    return c;
}

double bridge_count_xi(double x, double y, long long big_n, double t_tilde) {
    const double n13 = std::cbrt(static_cast<double>(big_n));
    const double kd = t_tilde * n13 * n13;
    const long long k = std::llround(kd);
    if (k < 1 || std::abs(kd - static_cast<double>(k)) > 1e-6)
        throw std::invalid_argument("bridge_count_xi: t_tilde * N^{2/3} must be a positive integer");
    const long long ex = static_cast<long long>(std::floor(big_n - n13 * x));
    const long long ey = static_cast<long long>(std::floor(big_n - n13 * y));
    const long long delta = ey - ex;
    if (std::abs(delta) > k) return 0.0;
    if ((k - delta) % 2 != 0)
        throw std::invalid_argument("bridge_count_xi: parity of t_tilde N^{2/3} must match endpoints");
    const double log_binom = std::lgamma(k + 1.0) -
                             std::lgamma(0.5 * (k + delta) + 1.0) -
                             std::lgamma(0.5 * (k - delta) + 1.0);
    return std::exp(std::log(static_cast<double>(big_n)) / 3.0 -
                    static_cast<double>(k) * std::log(2.0) + log_binom);
}

ContinuumPath sample_brownian_bridge(double x, double y, double t_max, int n_grid,
                                     RngStream& rng) {
    if (n_grid < 1) throw std::invalid_argument("sample_brownian_bridge: n_grid must be >= 1");
    if (!(t_max > 0.0)) throw std::invalid_argument("sample_brownian_bridge: t_max must be positive");
    ContinuumPath path;
    path.t_max = t_max;
    path.values.resize(n_grid + 1);
    path.values[0] = x;
    const double dt = t_max / n_grid;
    double v = x;
    for (int s = 1; s < n_grid; ++s) {
        const double remaining = t_max - (s - 1) * dt;
        const double mean = v + dt * (y - v) / remaining;
        const double var = dt * (remaining - dt) / remaining;
        v = mean + std::sqrt(std::max(var, 0.0)) * rng.normal();
        path.values[s] = v;
    }
    path.values[n_grid] = y;
    return path;
}

ContinuumPath sample_excursion(int n_grid, RngStream& rng) {
    if (n_grid < 2) throw std::invalid_argument("sample_excursion: n_grid must be >= 2");
    const auto b1 = sample_brownian_bridge(0.0, 0.0, 1.0, n_grid, rng);
    const auto b2 = sample_brownian_bridge(0.0, 0.0, 1.0, n_grid, rng);
    const auto b3 = sample_brownian_bridge(0.0, 0.0, 1.0, n_grid, rng);
    ContinuumPath e;
    e.t_max = 1.0;
    e.values.resize(n_grid + 1);
    for (int i = 0; i <= n_grid; ++i) {
        e.values[i] = std::sqrt(b1.values[i] * b1.values[i] +
                                b2.values[i] * b2.values[i] +
                                b3.values[i] * b3.values[i]);
    }
    return e;
}

ContinuumPath vervaat_excursion(int n_grid, RngStream& rng) {
    if (n_grid < 2) throw std::invalid_argument("vervaat_excursion: n_grid must be >= 2");
    const auto b = sample_brownian_bridge(0.0, 0.0, 1.0, n_grid, rng);
    const auto min_it = std::min_element(b.values.begin(), b.values.begin() + n_grid);
    const double m = *min_it;
    const int argmin = static_cast<int>(min_it - b.values.begin());
    ContinuumPath e;
    e.t_max = 1.0;
    e.values.resize(n_grid + 1);
    for (int i = 0; i < n_grid; ++i)
        e.values[i] = b.values[(i + argmin) % n_grid] - m;
    e.values[n_grid] = e.values[0];
    return e;
}

LocalTimeProfile local_time_profile(const ContinuumPath& path, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("local_time_profile: delta must be positive");
    const auto [min_it, max_it] = std::minmax_element(path.values.begin(), path.values.end());
    LocalTimeProfile prof;
    prof.delta = delta;
    prof.level0 = std::floor(*min_it / delta) * delta;
    const int n_bins = static_cast<int>(std::floor((*max_it - prof.level0) / delta)) + 1;
    prof.values.assign(n_bins, 0.0);
    const double dt = path.dt();
    for (int s = 0; s + 1 < static_cast<int>(path.values.size()); ++s) {
        const double v0 = path.values[s];
        const double v1 = path.values[s + 1];
        if (v0 == v1) {
            // Flat segment: all dwell time lands in one bin (delta-singular case).
            const int j = std::min(static_cast<int>((v0 - prof.level0) / delta), n_bins - 1);
            prof.values[j] += dt;
            continue;
        }
        const double lo = std::min(v0, v1);
        const double hi = std::max(v0, v1);
        const double rate = dt / (hi - lo);  // time per unit level
        int j = static_cast<int>(std::floor((lo - prof.level0) / delta));
        const int j_hi = std::min(static_cast<int>(std::floor((hi - prof.level0) / delta)),
                                  n_bins - 1);
        for (; j <= j_hi; ++j) {
            const double bin_lo = prof.level0 + j * delta;
            const double overlap = std::min(hi, bin_lo + delta) - std::max(lo, bin_lo);
            if (overlap > 0.0) prof.values[j] += rate * overlap;
        }
    }
    for (double& v : prof.values) v /= delta;
    return prof;
}

std::pair<double, double> area_and_l2(const ContinuumPath& path, double delta) {
    const double dt = path.dt();
    double area = 0.0;
    for (int s = 0; s + 1 < static_cast<int>(path.values.size()); ++s)
        area += 0.5 * (path.values[s] + path.values[s + 1]) * dt;
    const auto prof = local_time_profile(path, delta);
    double l2 = 0.0;
    for (double v : prof.values) l2 += v * v * delta;
    return {area, l2};
}

double binned_l2_correction(double delta, double t_max) {
    return 2.0 / 3.0 * delta * t_max;
}

}  // namespace airylab
