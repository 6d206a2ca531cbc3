#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <type_traits>
#include <vector>

namespace pseudomoments {

/// Splits [0, n) into `workers` contiguous chunks and runs fn(worker, begin,
/// end) on each, one thread per chunk. Results come back in worker order, so
/// a left-to-right reduction is deterministic for a fixed worker count.
template <typename Fn>
auto run_chunked(std::size_t n, unsigned workers, Fn fn)
    -> std::vector<std::invoke_result_t<Fn, unsigned, std::size_t, std::size_t>>
{
    using Result = std::invoke_result_t<Fn, unsigned, std::size_t, std::size_t>;
    workers = std::max(1u, workers);
    std::vector<Result> results(workers);
    const auto bounds = [&](unsigned w) { return n * w / workers; };
    if (workers == 1) {
        results[0] = fn(0u, std::size_t{0}, n);
        return results;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                results[w] = fn(w, bounds(w), bounds(w + 1));
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return results;
}

} // namespace pseudomoments
