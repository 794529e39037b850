#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace zerogap {

// Worker count used by the fan-out helpers; 0 means hardware concurrency.
void set_worker_count(unsigned n);
unsigned worker_count();

// Runs fn(i) for i in [0, n). Each index must write only its own output slot, so the
// result never depends on scheduling. The first exception thrown is rethrown.
template <class F>
void parallel_for(std::size_t n, const F& fn) {
    unsigned w = std::min<std::size_t>(worker_count(), n);
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto run = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lk(err_mu);
                if (!err) err = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < w; ++k) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace zerogap
