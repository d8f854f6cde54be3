#ifndef TSPGAPLAB_SRC_PARALLEL_HPP
#define TSPGAPLAB_SRC_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace tspgap::detail {

/// Runs fn(i) for i in [0, count) on up to `threads` workers and collects the
/// results indexed by i. Callers merge in index order, so the outcome never
/// depends on the schedule.
template <typename R, typename Fn>
std::vector<R> ordered_parallel_map(std::size_t count, int threads, Fn&& fn) {
    std::vector<R> results(count);
    if (count == 0) return results;
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                results[i] = fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
    return results;
}

} // namespace tspgap::detail

#endif
