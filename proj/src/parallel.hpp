#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sap::detail {

/// Evaluates f(0..n-1) on up to `workers` threads. Work item i always lands
/// in slot i, so any later reduction in index order is independent of the
/// worker count.
template <class R, class F>
std::vector<R> map_indexed(int n, int workers, F&& f) {
    std::vector<R> out(static_cast<std::size_t>(std::max(n, 0)));
    const int w = std::clamp(workers, 1, std::max(n, 1));
    if (w == 1) {
        for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = f(i);
        return out;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(w));
    for (int t = 0; t < w; ++t) {
        threads.emplace_back([&, t] {
            for (int i = t; i < n; i += w) {
                try {
                    out[static_cast<std::size_t>(i)] = f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : threads) th.join();
    if (error) std::rethrow_exception(error);
    return out;
}

}  // namespace sap::detail
