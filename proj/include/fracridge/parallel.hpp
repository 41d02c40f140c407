#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace fracridge {

/// Resolves a requested thread count; 0 means "one per hardware thread".
inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Splits [0, n) into contiguous chunks and runs `fn(begin, end)` on each.
/// Chunks must write to disjoint outputs, so results never depend on
/// scheduling. The first exception raised by any chunk is rethrown.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(resolve_threads(threads), n);
    if (workers <= 1) {
        if (n > 0) fn(std::size_t{0}, n);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::exception_ptr> errors((n + chunk - 1) / chunk);
    {
        std::vector<std::jthread> pool;
        pool.reserve(errors.size());
        for (std::size_t c = 0; c < errors.size(); ++c) {
            const std::size_t begin = c * chunk;
            const std::size_t end = std::min(n, begin + chunk);
            pool.emplace_back([&fn, &errors, c, begin, end] {
                try {
                    fn(begin, end);
                } catch (...) {
                    errors[c] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace fracridge
