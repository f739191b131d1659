#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace hcube {

/// Thrown when an input violates an operation's precondition.
class precondition_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when an engine is asked for more work than its budget allows.
class budget_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* version = "0.3.1";

struct Config {
    double alpha = 1.9;   // "small" means |A| < alpha^d
    double gamma = 0.1;   // tight/slack parameter for reconstruction
    int set_budget = 6;   // largest d for exhaustive set-level work
    std::size_t memory_budget_mb = 2048;

    void validate() const {
        if (!(alpha > 1.0 && alpha < 2.0))
            throw precondition_error("alpha must lie in (1,2)");
        if (!(gamma > 0.0 && gamma < 1.0))
            throw precondition_error("gamma must lie in (0,1)");
        if (set_budget < 1)
            throw precondition_error("set_budget must be positive");
    }

    double small_threshold(int d) const { return std::pow(alpha, d); }

    bool is_small(std::size_t size, int d) const {
        return static_cast<double>(size) < small_threshold(d);
    }
};

} // namespace hcube
