#pragma once

#include <stdexcept>
#include <string>

namespace rdcauchy {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// A pivot of the banded factorization vanished exactly.
class SingularOperator : public Error {
public:
    using Error::Error;
};

// Pivots degraded below the resonance threshold; k^2 sits on (or next to)
// a discrete eigenvalue of the truncated operator.
class NearResonance : public Error {
public:
    NearResonance(const std::string& what, double min_pivot, double max_pivot)
        : Error(what), min_pivot_(min_pivot), max_pivot_(max_pivot) {}

    double min_pivot() const noexcept { return min_pivot_; }
    double max_pivot() const noexcept { return max_pivot_; }

private:
    double min_pivot_;
    double max_pivot_;
};

// Iterative solve (linear or eigen) hit its cap without meeting tolerance.
class IterationStalled : public Error {
public:
    IterationStalled(const std::string& what, double best_residual)
        : Error(what), best_residual_(best_residual) {}

    double best_residual() const noexcept { return best_residual_; }

private:
    double best_residual_;
};

// The mixed problem's discrete form is not coercive and the caller did not
// opt into indefinite solves.
class NotCoercive : public Error {
public:
    using Error::Error;
};

class NoTransitionInRange : public Error {
public:
    using Error::Error;
};

}  // namespace rdcauchy
