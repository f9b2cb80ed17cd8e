#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace td {

// Thread cap: TD_THREADS if set (clamped to >= 1), else hardware concurrency.
inline int max_threads() {
    static const int n = [] {
        if (const char* s = std::getenv("TD_THREADS")) {
            const int v = std::atoi(s);
            if (v >= 1) return v;
        }
        const unsigned hc = std::thread::hardware_concurrency();
        return hc ? static_cast<int>(hc) : 1;
    }();
    return n;
}

// Work-stealing-free parallel loop: an atomic cursor hands out indices. fn(i)
// must write only to slot i of its outputs, which makes the result identical
// for every thread count; scheduling order is the only thing that varies.
// The first exception wins and is rethrown after all workers join.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t cap = static_cast<std::size_t>(max_threads());
    const std::size_t nt = n < cap ? (n ? n : 1) : cap;
    if (nt <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mtx;
    std::exception_ptr err;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mtx);
                if (!err) err = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (std::size_t k = 0; k < nt; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

} // namespace td
