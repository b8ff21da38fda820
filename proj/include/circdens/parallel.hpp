#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace circdens {

//! Replication thread cap: CIRC_CENSOR_THREADS if set and positive,
//! otherwise all hardware threads.
inline std::size_t replication_threads() {
    std::size_t cap = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CIRC_CENSOR_THREADS")) {
        char* end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && value > 0) {
            cap = static_cast<std::size_t>(value);
        }
    }
    return cap;
}

//! Run fn(i) for i in [0, count) on up to replication_threads() workers.
//! Each index is handled exactly once; callers that write fn's result to
//! slot i of a preallocated buffer get output independent of scheduling.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    const std::size_t workers =
        std::min(replication_threads(), count == 0 ? std::size_t{1} : count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            try {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= count) return;
                    fn(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace circdens
