#pragma once
#include <stdexcept>
#include <string>

namespace rislink {

/// Invalid scenario/configuration input (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure such as quadrature non-convergence or an
/// ill-conditioned solve (CLI exit code 3). Carries the best estimate
/// reached and the associated error bound when available.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double estimate, double error_bound)
        : std::runtime_error(what), estimate(estimate), error_bound(error_bound) {}
    double estimate;
    double error_bound;
};

/// Budget constraint cannot be met (CLI exit code 4 under --strict).
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace rislink
