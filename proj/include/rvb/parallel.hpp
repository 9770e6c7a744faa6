#ifndef RVB_PARALLEL_HPP
#define RVB_PARALLEL_HPP

#include <cstdlib>
#include <future>
#include <thread>
#include <vector>

namespace rvb {

/// Worker cap: hardware concurrency, overridable via the RVB_THREADS
/// environment variable.
inline int max_threads() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("RVB_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1 && cap < n) n = cap;
    }
    return n;
}

/// Run fn(0..count-1) in index-ordered batches of at most max_threads()
/// tasks. Results come back in index order, so callers that pick the first
/// qualifying index behave exactly like a sequential loop; stop_early lets
/// them skip the remaining batches.
template <typename Result, typename Fn, typename Stop>
std::vector<Result> batched_map(int count, Fn fn, Stop stop_early) {
    std::vector<Result> results;
    results.reserve(count);
    const int width = max_threads();
    for (int base = 0; base < count; base += width) {
        const int end = std::min(count, base + width);
        std::vector<std::future<Result>> batch;
        for (int k = base; k < end; ++k)
            batch.push_back(std::async(std::launch::async, fn, k));
        for (auto& f : batch) results.push_back(f.get());
        if (stop_early(results)) break;
    }
    return results;
}

} // namespace rvb

#endif
