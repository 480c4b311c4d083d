#pragma once

#include <stdexcept>
#include <string>

namespace coulomb {

/// Input outside the documented domain of an operation (maps to CLI exit 2).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Requested geometry or region has no implementation (maps to CLI exit 2).
class UnsupportedError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Evaluation at a kernel singularity, e.g. coincident points.
class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical budget (iterations, subdivisions, samples) ran out before the
/// requested tolerance was met. Carries the best estimate obtained.
class BudgetError : public std::runtime_error {
public:
    BudgetError(const std::string& what, double best, double err)
        : std::runtime_error(what), best_estimate(best), error_estimate(err) {}
    double best_estimate;
    double error_estimate;
};

/// A log-weight or energy left the finite range during sampling (maps to CLI exit 3).
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// Result of an evaluation together with an absolute error estimate.
struct EvalResult {
    double value = 0.0;
    double est_error = 0.0;
};

} // namespace coulomb
