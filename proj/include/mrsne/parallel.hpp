#ifndef MRSNE_PARALLEL_HPP
#define MRSNE_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace mrsne {

/// Global cap on worker threads. 0 means "use the hardware count".
inline std::atomic<int>& worker_cap() {
    static std::atomic<int> cap{0};
    return cap;
}

inline int resolved_workers(std::ptrdiff_t iterations) {
    int cap = worker_cap().load();
    if (cap <= 0) cap = static_cast<int>(std::thread::hardware_concurrency());
    if (cap <= 0) cap = 1;
    return static_cast<int>(std::min<std::ptrdiff_t>(cap, std::max<std::ptrdiff_t>(iterations, 1)));
}

/// Runs body(i) for i in [0, n). Iterations must write to disjoint state;
/// each iteration computes the same values regardless of which thread runs
/// it, so results do not depend on the worker count.
template <typename Body>
void parallel_for(std::ptrdiff_t n, Body&& body) {
    if (n <= 0) return;
    const int workers = resolved_workers(n);
    if (workers == 1 || n < 4) {
        for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    // One slot per worker so the lowest-range failure is rethrown regardless
    // of scheduling order.
    std::vector<std::exception_ptr> errors(workers);
    const std::ptrdiff_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::ptrdiff_t begin = w * chunk;
        const std::ptrdiff_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([begin, end, &body, slot = &errors[w]] {
            try {
                for (std::ptrdiff_t i = begin; i < end; ++i) body(i);
            } catch (...) {
                *slot = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace mrsne

#endif // MRSNE_PARALLEL_HPP
