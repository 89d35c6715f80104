#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace rtsgen {

inline int default_jobs() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

// Runs fn(0..n-1) across up to `jobs` worker threads. Each index owns its own
// state and seed, so results are identical for any job count; callers fold
// outputs in index order. The first exception is rethrown on the caller.
inline void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    if (jobs <= 1 || n == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    int workers = std::min(jobs, n);
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex errorMutex;

    auto body = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            int i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) break;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(errorMutex);
                if (!error) error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace rtsgen
