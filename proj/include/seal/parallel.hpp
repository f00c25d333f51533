#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace seal {

// Runs fn(i) for i in [0, n). Each index owns a disjoint output slot that
// the caller preallocated, so the result is bit-identical for any thread
// count. Indices are dealt round-robin; workers never share mutable state.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::size_t nt = static_cast<std::size_t>(threads);
    if (nt > n) nt = n;
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (std::size_t w = 0; w < nt; ++w) {
        pool.emplace_back([&fn, n, nt, w] {
            for (std::size_t i = w; i < n; i += nt) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace seal
