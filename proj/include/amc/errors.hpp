#pragma once

#include <stdexcept>
#include <string>

namespace amc {

// Bad input: parameters, shapes, preconditions. Maps to CLI exit code 1.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A computation could not be completed (step underflow, NaN, degenerate orbit).
// Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, double time = 0.0)
        : std::runtime_error(what), time_(time) {}

    // Simulation time at which the failure was detected (0 when not time-related).
    double time() const noexcept { return time_; }

private:
    double time_;
};

}  // namespace amc
