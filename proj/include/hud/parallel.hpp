#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace hud {

/// Split [0, count) into contiguous chunks and run `body(begin, end)` on a
/// small thread pool. Falls back to a single call for small ranges.
template <typename Body>
void parallel_for(std::size_t count, const Body& body, std::size_t grain = 256) {
    unsigned hw = std::thread::hardware_concurrency();
    std::size_t n_threads = hw ? hw : 1;
    if (n_threads > 1 && count / n_threads < grain) n_threads = count / grain ? count / grain : 1;
    if (n_threads <= 1) {
        body(static_cast<std::size_t>(0), count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    const std::size_t chunk = (count + n_threads - 1) / n_threads;
    for (std::size_t t = 0; t < n_threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = begin + chunk < count ? begin + chunk : count;
        if (begin >= end) break;
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace hud
