#ifndef RISOP_PARALLEL_HPP
#define RISOP_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace risop {

/// Worker count: explicit request > RISOP_WORKERS env var > hardware.
inline int resolve_workers(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("RISOP_WORKERS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs fn(task_index) for task_index in [0, n_tasks) on a pool of `workers`
/// threads.  Task payloads must write only to per-task slots; merge order is
/// the caller's responsibility (iterate slots in index order for determinism).
template <class Fn>
void parallel_for(std::size_t n_tasks, int workers, Fn&& fn) {
    workers = resolve_workers(workers);
    if (n_tasks == 0) return;
    if (workers <= 1 || n_tasks == 1) {
        for (std::size_t i = 0; i < n_tasks; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n_tasks) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    int n_threads = static_cast<int>(std::min<std::size_t>(workers, n_tasks));
    threads.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace risop

#endif
