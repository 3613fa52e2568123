#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace sgf {

using Vec3 = std::array<double, 3>;
using Index3 = std::array<int, 3>;

inline constexpr double pi = std::numbers::pi;

/// Raised when an argument violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a kernel is evaluated closer to the t = tau diagonal than the
/// truncation policy allows.
class TimeSeparationError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) {
        throw InvalidArgument(message);
    }
}

namespace detail {
inline std::atomic<int> thread_count{1};
}

inline void set_thread_count(int n) { detail::thread_count.store(std::max(1, n)); }
inline int thread_count() { return detail::thread_count.load(); }

/// Runs fn(i) for i in [0, n) over a static contiguous partition.
///
/// Each index is handled by exactly one worker and every reduction stays
/// inside fn, so results are bit-identical for any thread count.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) {
            break;
        }
        pool.emplace_back([begin, end, &fn] {
            for (std::size_t i = begin; i < end; ++i) {
                fn(i);
            }
        });
    }
}

}  // namespace sgf
