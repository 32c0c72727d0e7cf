#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cylspec {

// Bad mathematical input (modulus out of range, invalid grid sizes, ...).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Bad run configuration (CLI / config file); maps to exit code 2.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SingularOperatorError : std::runtime_error {
    explicit SingularOperatorError(const std::string& what, int shift_index = -1)
        : std::runtime_error(what), shift_index(shift_index) {}
    int shift_index;  // ADI shift j that produced the singular operator, or -1
};

struct NonConvergenceError : std::runtime_error {
    NonConvergenceError(const std::string& what, std::vector<double> history)
        : std::runtime_error(what), residual_history(std::move(history)) {}
    std::vector<double> residual_history;
};

struct NotIncompressibleError : std::runtime_error {
    NotIncompressibleError(const std::string& what, double divergence)
        : std::runtime_error(what), divergence(divergence) {}
    double divergence;
};

// NaN/Inf guard and other runtime numerical failures; maps to exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cylspec
