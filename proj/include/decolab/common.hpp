// common.hpp — shared error types, complex alias, small numeric helpers

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace decolab {

using Complex = std::complex<double>;

// Thrown when an input file or scenario description violates the schema or
// a model invariant. CLI maps this to exit code 2.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when an iterative kernel fails to converge or a model leaves its
// domain of validity (depleted state, undefined effective rate, ...).
// CLI maps this to exit code 3.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown on filesystem failures while staging outputs. CLI exit code 4.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

inline bool nearly_equal(double a, double b, double tol) noexcept {
    return std::abs(a - b) <= tol;
}

}  // namespace decolab
