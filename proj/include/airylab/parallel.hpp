#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

#include "airylab/mc.hpp"
#include "airylab/rng.hpp"

namespace airylab {

// Thread count: explicit request, else AIRY_LAB_THREADS, else hardware.
int resolve_threads(int requested);

// Runs fn(i) for i in [0, n) across `threads` workers pulling from a shared
// atomic counter. Tasks must write only to their own slots.
void parallel_tasks(long long n, int threads, const std::function<void(long long)>& fn);

// One double per task, each task drawing from its own counter-based stream
// (seed, task_base + i). The result order is fixed by the task index, so the
// reduction is independent of the thread count.
std::vector<double> parallel_sample(std::uint64_t seed, std::uint64_t task_base,
                                    long long n, int threads,
                                    const std::function<double(RngStream&)>& fn);

McEstimate accumulate(const std::vector<double>& values);

}  // namespace airylab
