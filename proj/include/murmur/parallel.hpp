#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace murmur {

inline unsigned default_threads()
{
    unsigned n = std::thread::hardware_concurrency();
    return n ? n : 1;
}

// Runs fn(i) for i in [0, n) over contiguous static chunks. Callers write into
// per-index slots and reduce in index order, so output never depends on the
// thread count.
template <class F>
void parallel_for(std::size_t n, F&& fn, unsigned threads = 0)
{
    if (threads == 0) threads = default_threads();
    threads = unsigned(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::exception_ptr err;
    std::mutex m;
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        std::size_t lo = n * t / threads, hi = n * (t + 1) / threads;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard lk(m);
                if (!err) err = std::current_exception();
            }
        });
    }
    pool.clear();
    if (err) std::rethrow_exception(err);
}

}  // namespace murmur
