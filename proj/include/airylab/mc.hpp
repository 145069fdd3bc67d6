#pragma once

#include <cmath>
#include <cstdint>

namespace airylab {

// Streaming mean/variance accumulator (Welford). Merging is Chan's parallel
// update and is associative up to rounding, so pairwise reductions over
// fixed task partitions reproduce bit-identical results.
struct McEstimate {
    double mean = 0.0;
    double m2 = 0.0;  // sum of squared deviations from the running mean
    long long count = 0;

    void add(double x) {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }

    void merge(const McEstimate& other) {
        if (other.count == 0) return;
        if (count == 0) {
            *this = other;
            return;
        }
        const double na = static_cast<double>(count);
        const double nb = static_cast<double>(other.count);
        const double delta = other.mean - mean;
        const double n = na + nb;
        mean += delta * nb / n;
        m2 += other.m2 + delta * delta * na * nb / n;
        count += other.count;
    }

    double variance() const {
        return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
    }

    double std_error() const {
        return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
    }

    // Rebuild an accumulator from summary statistics (used when an estimate
    // is assembled from quadrature of sub-estimates rather than raw samples).
    static McEstimate from_summary(double mean, double std_error, long long count) {
        McEstimate e;
        e.mean = mean;
        e.count = count;
        if (count > 1) {
            e.m2 = std_error * std_error * static_cast<double>(count) *
                   static_cast<double>(count - 1);
        }
        return e;
    }
};

}  // namespace airylab
