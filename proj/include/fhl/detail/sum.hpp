#pragma once
//
// fhl/detail/sum.hpp
//
// Compensated summation and a deterministic parallel map. Results are
// independent of the thread count: workers only fill preassigned slots,
// reductions happen sequentially afterwards.
//

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "fhl/common.hpp"

namespace fhl::detail {

struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double value() const { return s; }
};

struct KahanComplexSum {
    KahanSum re, im;
    void add(Complex z) {
        re.add(z.real());
        im.add(z.imag());
    }
    Complex value() const { return {re.value(), im.value()}; }
};

inline int& thread_count_ref() {
    static int n = [] {
        if (const char* env = std::getenv("FHL_THREADS")) {
            int v = std::atoi(env);
            if (v >= 1) return v;
        }
        unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(hw > 8 ? 8 : hw);
    }();
    return n;
}

inline int thread_count() { return thread_count_ref(); }
inline void set_thread_count(int n) { thread_count_ref() = n < 1 ? 1 : n; }

// f(i) for i in [0, n); exceptions from workers are rethrown on the caller.
template <class F>
void parallel_for(std::size_t n, F&& f) {
    const int nt = thread_count();
    if (nt <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(nt), n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    const std::size_t chunk = (n + workers - 1) / workers;
    std::mutex guard;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) {
                    if (failed.load(std::memory_order_relaxed)) return;
                    f(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(guard);
                if (!failed.exchange(true)) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace fhl::detail
