#pragma once

#include <stdexcept>
#include <string>

namespace kanto {

// Input violating a documented precondition (bad cell, bad config, ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numeric machinery failed: quadrature could not reach the requested
// tolerance, a modular overflowed, a bracket search found nothing.
// Carries the best estimate obtained so far when one exists.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what)
        : std::runtime_error(what) {}
    NumericError(const std::string& what, double best, double achieved)
        : std::runtime_error(what), best_estimate(best), achieved_tolerance(achieved) {}

    double best_estimate = 0.0;
    double achieved_tolerance = 0.0;
};

// A kernel-condition audit could not certify its condition.
class AuditFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace kanto
