#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstddef>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace pacflab {

inline constexpr const char* version() { return "1.0.0"; }

/// Worker-thread cap: PACFLAB_THREADS if set (>=1), else hardware concurrency.
inline unsigned thread_budget() {
    if (const char* env = std::getenv("PACFLAB_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

/// Run fn(i) for i in [0, count) on up to thread_budget() threads.
/// fn must be safe to call concurrently for distinct i.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    unsigned nt = thread_budget();
    if (nt <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    if (nt > count) nt = static_cast<unsigned>(count);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    std::exception_ptr first_error;
    std::mutex err_mx;
    for (unsigned t = 0; t < nt; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < count; i += nt) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mx);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

/// Neumaier-compensated accumulator: running sum with a separate
/// compensation term so that n ~ 1e4-term series with 1/n-scale answers
/// keep full double precision.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

/// Compensated dot product of two equal-length ranges.
inline double compensated_dot(std::span<const double> x, std::span<const double> y) {
    CompensatedSum acc;
    std::size_t n = x.size() < y.size() ? x.size() : y.size();
    for (std::size_t i = 0; i < n; ++i) acc.add(x[i] * y[i]);
    return acc.value();
}

/// Compensated sum of a range.
inline double compensated_sum(std::span<const double> x) {
    CompensatedSum acc;
    for (double v : x) acc.add(v);
    return acc.value();
}

/// Cutoffs and tolerance targets governing the infinite sums.
/// inner_len caps the v-sums (series tails), mid_len the m-window of the
/// reference nested-sum evaluator (0 = auto: max(50*n_max, 5000)),
/// outer_depth the series depth in k, abs_tol the target absolute
/// truncation error per reported alpha_n.
struct TruncationPolicy {
    std::size_t inner_len = std::size_t(1) << 20;
    std::size_t mid_len = 0;
    std::size_t outer_depth = 256;
    double abs_tol = 1e-8;

    void check() const {
        if (inner_len < 1 || outer_depth < 1 || !(abs_tol > 0.0))
            throw std::invalid_argument("TruncationPolicy: lengths must be >= 1, abs_tol > 0");
    }
    std::size_t mid_len_for(std::size_t n_max) const {
        if (mid_len > 0) return mid_len;
        return std::max<std::size_t>(50 * n_max, 5000);
    }
};

// Error categories surfaced by the CLI as distinct exit codes.
struct config_error : std::runtime_error {   // exit 2
    using std::runtime_error::runtime_error;
};
struct model_error : std::runtime_error {    // exit 3
    using std::runtime_error::runtime_error;
};
struct numeric_error : std::runtime_error {  // exit 4
    using std::runtime_error::runtime_error;
};

}  // namespace pacflab
