#include "airylab/parallel.hpp"

#include <cstdlib>
#include <mutex>
#include <stdexcept>

namespace airylab {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("AIRY_LAB_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_tasks(long long n, int threads, const std::function<void(long long)>& fn) {
    threads = resolve_threads(threads);
    if (threads <= 1 || n <= 1) {
        for (long long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const long long i = next.fetch_add(1);
                if (i >= n || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failed.load()) std::rethrow_exception(error);
}

std::vector<double> parallel_sample(std::uint64_t seed, std::uint64_t task_base,
                                    long long n, int threads,
                                    const std::function<double(RngStream&)>& fn) {
    std::vector<double> out(n);
    parallel_tasks(n, threads, [&](long long i) {
        RngStream rng(seed, task_base + static_cast<std::uint64_t>(i));
        out[i] = fn(rng);
    });
    return out;
}

McEstimate accumulate(const std::vector<double>& values) {
    McEstimate est;
    for (double v : values) est.add(v);
    return est;
}

}  // namespace airylab
