#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace seqbench::detail {

// Runs fn(i) for i in [0, n) on up to `threads` workers. The first exception
// thrown by any call is rethrown on the caller's thread.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> workers;
        workers.reserve(threads);
        for (std::size_t w = 0; w < threads; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = n;
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

// Running mean; exact for constant inputs.
class Mean {
public:
    void add(double x) {
        ++n_;
        mean_ += (x - mean_) / static_cast<double>(n_);
    }
    double value() const noexcept { return mean_; }
    std::size_t count() const noexcept { return n_; }

private:
    double mean_ = 0.0;
    std::size_t n_ = 0;
};

}  // namespace seqbench::detail
