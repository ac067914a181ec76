#ifndef BLOCKBOOT_COMMON_HPP_
#define BLOCKBOOT_COMMON_HPP_

#include <cmath>
#include <cstddef>
#include <functional>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace blockboot {

// Thrown on any precondition/invariant violation; the CLI maps it to exit code 2.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when an experiment exceeds its scalar-op budget; CLI exit code 3.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846;

inline double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
}

inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

inline double mean_of(std::span<const double> xs) {
    if (xs.empty()) throw ValidationError("mean_of: empty input");
    double s = 0.0;
    for (double v : xs) s += v;
    return s / static_cast<double>(xs.size());
}

// Biased (divisor n) sample variance.
inline double variance_of(std::span<const double> xs) {
    const double m = mean_of(xs);
    double s = 0.0;
    for (double v : xs) s += (v - m) * (v - m);
    return s / static_cast<double>(xs.size());
}

// Unbiased (divisor n-1) sample variance.
inline double variance_unbiased(std::span<const double> xs) {
    if (xs.size() < 2) throw ValidationError("variance_unbiased: need at least 2 values");
    const double m = mean_of(xs);
    double s = 0.0;
    for (double v : xs) s += (v - m) * (v - m);
    return s / static_cast<double>(xs.size() - 1);
}

// Runs fn(i) for i in [0, count). Results must be written by index by the
// caller; the partition is static so output never depends on thread count.
inline void parallel_for_indexed(std::size_t count, unsigned threads,
                                 const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::exception_ptr first_error;
    std::mutex err_mutex;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (std::size_t i = t; i < count; i += threads) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace blockboot

#endif  // BLOCKBOOT_COMMON_HPP_
