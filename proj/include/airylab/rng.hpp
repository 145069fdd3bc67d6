#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace airylab {

// Counter-based random stream. Output block j of stream (seed, task) is a
// strong 64-bit mix of the counter with a key derived from (seed, task), so
// streams with distinct (seed, task) tuples are independent and a stream can
// be reconstructed from its tuple alone. The tuple travels with every result
// record for reproducibility.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t task)
        : seed_(seed), task_(task) {
        key_ = mix(seed ^ mix(task + 0x9e3779b97f4a7c15ULL));
        key2_ = mix(key_ + 0x6a09e667f3bcc909ULL);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t task() const { return task_; }

    std::uint64_t next_u64() {
        std::uint64_t z = (counter_++) * 0x9e3779b97f4a7c15ULL + key_;
        z ^= z >> 32;
        z *= 0xd6e8feb86659fd93ULL;
        z ^= z >> 32;
        z *= key2_ | 1ULL;
        z ^= z >> 29;
        return mix(z);
    }

    // Uniform on (0,1), never exactly 0 or 1.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Marsaglia's polar method, second value cached.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double r = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = v * r;
        have_cached_ = true;
        return u * r;
    }

    // Gamma(shape, scale 1) via Marsaglia-Tsang, with the u^(1/shape) boost
    // for shape < 1. Stable up to shapes of order 1e7.
    double gamma(double shape) {
        if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be positive");
        if (shape < 1.0) {
            const double u = uniform();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t seed_;
    std::uint64_t task_;
    std::uint64_t key_;
    std::uint64_t key2_;
    std::uint64_t counter_ = 0;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace airylab
