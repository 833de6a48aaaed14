#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace momlim {

/// Runs fn(i) for i in [0, n) across `threads` workers (0 = hardware
/// concurrency). Callers index into preallocated storage, so output order is
/// independent of the worker count.
inline void parallel_for(long n, int threads, const std::function<void(long)>& fn) {
    if (n <= 0) return;
    unsigned workers = threads > 0 ? static_cast<unsigned>(threads)
                                   : std::thread::hardware_concurrency();
    if (workers <= 1 || n == 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    if (workers > static_cast<unsigned>(n)) workers = static_cast<unsigned>(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (long i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace momlim
