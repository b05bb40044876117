#pragma once

#include <stdexcept>
#include <string>

namespace thzgeo {

/// Argument outside the mathematical or physical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A series failed to converge (term growth tripped the divergence guard).
class ConvergenceError : public std::runtime_error {
public:
    enum class Reason { diverged, term_limit, out_of_range };

    ConvergenceError(const std::string& what, int terms_used, double last_term,
                     Reason reason = Reason::diverged)
        : std::runtime_error(what), terms_used_(terms_used), last_term_(last_term),
          reason_(reason) {}

    int terms_used() const noexcept { return terms_used_; }
    double last_term() const noexcept { return last_term_; }
    Reason reason() const noexcept { return reason_; }

private:
    int terms_used_;
    double last_term_;
    Reason reason_;
};

/// Adaptive quadrature exhausted its subdivision budget.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double value, double error_estimate)
        : std::runtime_error(what), value_(value), error_estimate_(error_estimate) {}

    double value() const noexcept { return value_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double value_;
    double error_estimate_;
};

/// A quantity is undefined for the given parameters (e.g. conditioning on a
/// null event).
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace thzgeo
