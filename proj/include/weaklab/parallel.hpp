#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace weaklab {

/// Worker cap used by parallel loops; 0 means hardware concurrency.
void set_thread_limit(unsigned n);
[[nodiscard]] unsigned thread_limit();

/// Runs body(i) for i in [0, n) on up to thread_limit() threads, contiguous
/// chunks per thread. Callers write to disjoint slots, so results never
/// depend on the thread count.
template <class Body>
void parallel_for(std::int64_t n, Body&& body) {
    const auto workers = static_cast<std::int64_t>(std::min<std::int64_t>(thread_limit(), n));
    if (workers <= 1) {
        for (std::int64_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const std::int64_t chunk = (n + workers - 1) / workers;
    for (std::int64_t w = 0; w < workers; ++w) {
        const std::int64_t lo = w * chunk;
        const std::int64_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::int64_t i = lo; i < hi; ++i) body(i);
        });
    }
}

}  // namespace weaklab
