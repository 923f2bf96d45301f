#pragma once

// Index-ordered parallel map over [0, n). Results land in slot i regardless of
// which worker computed them, so output order never depends on scheduling. If
// any call throws, the exception from the lowest index is rethrown.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace pw {

inline std::size_t worker_count(std::size_t n)
{
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    return std::max<std::size_t>(1, std::min(hw, n));
}

template <class F>
auto parallel_map(std::size_t n, F&& f) -> std::vector<std::invoke_result_t<F&, std::size_t>>
{
    using R = std::invoke_result_t<F&, std::size_t>;
    std::vector<std::optional<R>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                slots[i].emplace(f(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    const std::size_t workers = worker_count(n);
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers - 1);
        for (std::size_t w = 1; w < workers; ++w)
            pool.emplace_back(work);
        work();
    }

    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    std::vector<R> out;
    out.reserve(n);
    for (auto& s : slots)
        out.push_back(std::move(*s));
    return out;
}

} // namespace pw
