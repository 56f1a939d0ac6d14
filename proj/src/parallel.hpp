#pragma once

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace nykpca::detail {

// 0 = use hardware concurrency; tests pin this to compare thread counts
inline std::atomic<long>& thread_count_override() {
    static std::atomic<long> value{0};
    return value;
}

// Static row partitioning over worker threads. Each index is processed by
// exactly one thread and every entry written is a pure function of the
// inputs, so results are identical for any thread count.
template <typename Fn>
void parallel_rows(long rows, Fn&& fn) {
    long nthreads = thread_count_override().load(std::memory_order_relaxed);
    if (nthreads <= 0) {
        unsigned hw = std::thread::hardware_concurrency();
        nthreads = hw == 0 ? 1 : static_cast<long>(hw);
    }
    nthreads = std::min(nthreads, rows);
    if (nthreads <= 1 || rows < 64) {
        for (long i = 0; i < rows; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nthreads));
    const long chunk = (rows + nthreads - 1) / nthreads;
    for (long t = 0; t < nthreads; ++t) {
        const long lo = t * chunk;
        const long hi = std::min(rows, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (long i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace nykpca::detail
