// Fan-out over independent jobs with results returned in input order.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace amc::cli {

inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// Runs fn(items[i]) for every i on up to `workers` threads. Results come back indexed by
// input position whatever the completion order; the first failure (by index) is rethrown.
template <class T, class Fn>
auto ordered_map(const std::vector<T>& items, Fn fn, unsigned workers = default_workers())
    -> std::vector<std::invoke_result_t<Fn&, const T&>> {
    using R = std::invoke_result_t<Fn&, const T&>;
    std::vector<std::optional<R>> slots(items.size());
    std::vector<std::exception_ptr> errors(items.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < items.size(); i = next++) {
            try {
                slots[i].emplace(fn(items[i]));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(items.size())));
    if (n == 1) {
        work();
    } else {
        std::vector<std::jthread> threads;
        for (unsigned k = 0; k < n; ++k) threads.emplace_back(work);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<R> out;
    out.reserve(items.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace amc::cli
