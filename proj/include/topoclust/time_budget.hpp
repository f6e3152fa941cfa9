#pragma once
#include <chrono>
#include <limits>

#include "topoclust/errors.hpp"

namespace topoclust {

// Wall-clock budget for an interruptible computation. Unbounded by default.
struct TimeBudget {
    double max_seconds = std::numeric_limits<double>::infinity();

    static TimeBudget unbounded() { return TimeBudget{}; }

    static TimeBudget seconds(double s) {
        if (!(s > 0.0))
            throw InvalidParameter("time budget must be positive when bounded");
        return TimeBudget{s};
    }

    bool bounded() const {
        return max_seconds != std::numeric_limits<double>::infinity();
    }
};

// A running deadline derived from a TimeBudget at a fixed start instant.
class Deadline {
public:
    explicit Deadline(const TimeBudget& budget)
        : start_(std::chrono::steady_clock::now()), budget_(budget) {}

    double elapsed_seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start_)
            .count();
    }

    bool expired() const {
        return budget_.bounded() && elapsed_seconds() >= budget_.max_seconds;
    }

    // Seconds left before expiry; never negative; +inf when unbounded.
    double remaining_seconds() const {
        if (!budget_.bounded())
            return std::numeric_limits<double>::infinity();
        const double r = budget_.max_seconds - elapsed_seconds();
        return r > 0.0 ? r : 0.0;
    }

private:
    std::chrono::steady_clock::time_point start_;
    TimeBudget budget_;
};

} // namespace topoclust
