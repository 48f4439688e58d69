#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace sudler {

inline constexpr std::uint64_t kChunkSize = std::uint64_t{1} << 16;

// 0 means "use hardware concurrency".
void set_thread_count(int n);
int thread_count();

// Evaluates fn(i) for i in [0, n) and returns the results in index order,
// whatever the scheduling.
template <class Fn>
auto map_indices(std::uint64_t n, Fn fn) -> std::vector<decltype(fn(std::uint64_t{0}))> {
    using Result = decltype(fn(std::uint64_t{0}));
    std::vector<Result> out(n);
    const unsigned workers = static_cast<unsigned>(
        std::min<std::uint64_t>(n, static_cast<std::uint64_t>(thread_count())));
    if (workers <= 1) {
        for (std::uint64_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::uint64_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::uint64_t i = next++; i < n; i = next++) out[i] = fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

// Splits [first, last) into fixed-size chunks and evaluates fn(lo, hi) on each.
// Results come back in chunk order, so a left-to-right fold over them does not
// depend on the number of threads.
template <class Fn>
auto map_chunks(std::uint64_t first, std::uint64_t last, Fn fn)
    -> std::vector<decltype(fn(first, last))> {
    if (last <= first) return {};
    const std::uint64_t n_chunks = (last - first + kChunkSize - 1) / kChunkSize;
    return map_indices(n_chunks, [&](std::uint64_t c) {
        std::uint64_t lo = first + c * kChunkSize;
        std::uint64_t hi = std::min(last, lo + kChunkSize);
        return fn(lo, hi);
    });
}

}  // namespace sudler
