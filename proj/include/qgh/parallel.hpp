#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <limits>
#include <thread>
#include <vector>

namespace qgh::parallel {

inline std::atomic<unsigned>& max_threads_slot() {
    static std::atomic<unsigned> n{0};  // 0 = use hardware parallelism
    return n;
}

inline void set_max_threads(unsigned n) { max_threads_slot().store(n); }

inline unsigned effective_threads(std::size_t work_items) {
    unsigned cap = max_threads_slot().load();
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    unsigned n = cap == 0 ? hw : std::min(cap, hw);
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(1, work_items)));
}

/// Best (smallest or largest) value over [0, n) with first-index tie-breaking.
/// The reduction is order-independent, so the result does not depend on the
/// number of workers.
struct Best {
    double value;
    std::size_t index;
};

template <typename F>
inline Best reduce_max(std::size_t n, F&& eval) {
    unsigned workers = effective_threads(n);
    auto combine = [](Best a, Best b) {
        if (b.value > a.value) return b;
        if (b.value < a.value) return a;
        return b.index < a.index ? b : a;
    };
    if (workers <= 1 || n < 64) {
        Best best{-1.0, 0};
        bool first = true;
        for (std::size_t i = 0; i < n; ++i) {
            double v = eval(i);
            if (first || v > best.value) { best = {v, i}; first = false; }
        }
        return best;
    }
    std::vector<Best> partial(workers, Best{0.0, 0});
    std::vector<std::thread> threads;
    std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
            Best best{0.0, lo};
            bool first = true;
            for (std::size_t i = lo; i < hi; ++i) {
                double v = eval(i);
                if (first || v > best.value) { best = {v, i}; first = false; }
            }
            partial[w] = first ? Best{-std::numeric_limits<double>::infinity(), n} : best;
        });
    }
    for (auto& t : threads) t.join();
    Best best = partial[0];
    for (unsigned w = 1; w < workers; ++w) best = combine(best, partial[w]);
    return best;
}

}  // namespace qgh::parallel
