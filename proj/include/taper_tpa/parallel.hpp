#ifndef TAPER_TPA_PARALLEL_HPP
#define TAPER_TPA_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

namespace taper_tpa {

/// Evaluates f(0) .. f(count-1) on up to `threads` workers. Results keep
/// index order regardless of scheduling; the first exception thrown by any
/// task is rethrown after all workers join.
template <class F>
auto parallel_map(std::size_t count, unsigned threads, F&& f) -> std::vector<std::invoke_result_t<F&, std::size_t>>
{
    using Result = std::invoke_result_t<F&, std::size_t>;
    std::vector<Result> results(count);
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            results[i] = f(i);
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        results[i] = f(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure)
                            failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    return results;
}

/// Worker count: the TAPER_TPA_THREADS environment variable wins over the
/// requested value; zero means hardware concurrency.
inline unsigned resolve_threads(unsigned requested)
{
    if (const char* env = std::getenv("TAPER_TPA_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0)
                return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    if (requested > 0)
        return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace taper_tpa

#endif // TAPER_TPA_PARALLEL_HPP
