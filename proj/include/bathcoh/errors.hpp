// errors.hpp — exception types shared by all modules
#pragma once

#include <stdexcept>
#include <cstdio>
#include <string>

namespace bathcoh {

inline std::string to_sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

// Invalid input: out-of-domain parameter, unsupported variant, bad grid.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An integral did not reach its tolerance. Carries the error estimate.
struct QuadratureError : std::runtime_error {
    double estimate;
    QuadratureError(const std::string& what, double est)
        : std::runtime_error(what + " (estimated error " + to_sci(est) + ")"), estimate(est) {}
};

// Iterative solver (Newton, adaptive integrator) failed to converge.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The dynamics has an undamped direction, so no unique fixed point exists.
struct NoSteadyState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Truncated Fock basis lost too much population to its boundary.
struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bathcoh
