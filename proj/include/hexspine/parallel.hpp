#pragma once

#include <algorithm>
#include <cstdlib>
#include <future>
#include <thread>
#include <vector>

namespace hexspine {

/// Worker count: an explicit override, else HEXSPINE_THREADS, else the hardware.
inline int worker_count(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("HEXSPINE_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs f(i) for i in [0, n) on up to `workers` threads; results keep index order.
template <class F>
auto parallel_map(int n, F f, int workers = 0) -> std::vector<decltype(f(0))> {
    using R = decltype(f(0));
    std::vector<R> out(n);
    const int w = std::min(worker_count(workers), std::max(n, 1));
    std::vector<std::future<void>> jobs;
    for (int t = 0; t < w; ++t) {
        jobs.push_back(std::async(std::launch::async, [&, t] {
            for (int i = t; i < n; i += w) out[i] = f(i);
        }));
    }
    for (auto& j : jobs) j.get();
    return out;
}

} // namespace hexspine
