#pragma once

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace epower {

/// Worker count: explicit request wins, then EPOWER_THREADS, then hardware.
inline int resolve_threads(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("EPOWER_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Runs f(i) for i in [0,n).  Work items must be independent; callers get
/// determinism by writing results into slot i and reducing by index.
template <class F>
void parallel_for(long long n, F&& f, int threads = 0) {
    const int nt = std::min<long long>(resolve_threads(threads), n > 0 ? n : 1);
    if (nt <= 1) {
        for (long long i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    std::atomic<bool> failed{false};
    std::exception_ptr first_error = nullptr;
    std::mutex err_mutex;
    pool.reserve(static_cast<size_t>(nt));
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                long long i = next.fetch_add(1);
                if (i >= n || failed.load(std::memory_order_relaxed)) return;
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                    failed.store(true, std::memory_order_relaxed);
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace epower
