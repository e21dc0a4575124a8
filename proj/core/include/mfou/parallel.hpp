#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mfou {

// Runs body(i) for i in [0, n) on up to `threads` workers. Work items must
// write only to their own slot; the first exception is rethrown.
template <class Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_lock;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> g(err_lock);
                if (!err) err = std::current_exception();
            }
        }
    };
    const std::size_t nt = std::min<std::size_t>(std::size_t(threads), n);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace mfou
