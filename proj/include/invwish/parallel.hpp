#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace invwish {

/// Static partition of [0, n) across `threads` workers. Bodies must
/// write only to index-addressed slots; replica RNG streams are keyed by
/// the index, so results do not depend on the thread count.
inline void parallel_for(long n, int threads, const std::function<void(long)>& body) {
    if (n <= 0) return;
    threads = std::max(1, threads);
    if (static_cast<long>(threads) > n) threads = static_cast<int>(n);
    if (threads <= 1) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (long i = t; i < n; i += threads) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

inline int default_threads() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

} // namespace invwish
