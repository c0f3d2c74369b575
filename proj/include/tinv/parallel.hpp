#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tinv {

/// Number of workers to use when the caller passes 0.
inline int default_threads()
{
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs task(i) for i in [0, count) on up to `threads` workers and folds the
/// results with +. Tasks are claimed from a shared counter, so the split is
/// dynamic; the fold itself is in task order, which keeps results
/// deterministic for non-commutative accumulators as well.
template <class T, class Task>
T parallel_sum(std::size_t count, int threads, Task task)
{
    if (threads <= 0)
        threads = default_threads();
    std::vector<T> partial(count);
    if (threads == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            partial[i] = task(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count)
                    return;
                try {
                    partial[i] = task(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next.store(count);
                    return;
                }
            }
        };
        const int n = static_cast<int>(std::min<std::size_t>(count, static_cast<std::size_t>(threads)));
        std::vector<std::thread> pool;
        pool.reserve(n);
        for (int t = 0; t < n; ++t)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
        if (failure)
            std::rethrow_exception(failure);
    }
    T total{};
    for (auto& p : partial)
        total += p;
    return total;
}

} // namespace tinv
