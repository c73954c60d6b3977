#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fixpoint {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Two points (or a point and a domain) disagree on dimension.
class DimensionMismatch : public Error {
public:
    DimensionMismatch(std::size_t lhs, std::size_t rhs)
        : Error("dimension mismatch: " + std::to_string(lhs) + " vs " + std::to_string(rhs)),
          lhs_dim(lhs),
          rhs_dim(rhs) {}

    std::size_t lhs_dim;
    std::size_t rhs_dim;
};

// Text could not be parsed; offset is the character position of the failure.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : Error(msg + " (at offset " + std::to_string(offset) + ")"), offset(offset) {}

    std::size_t offset;
};

// Runtime evaluation failure (division by zero, negative input to a
// nonnegative-domain function, ...).
class EvalError : public Error {
public:
    explicit EvalError(const std::string& msg) : Error(msg) {}
};

// No branch guard matched the evaluation point.
class CoverageError : public Error {
public:
    explicit CoverageError(const std::string& msg) : Error(msg) {}
};

// A map produced a value outside its domain beyond tolerance.
class SelfMapViolation : public Error {
public:
    explicit SelfMapViolation(const std::string& msg) : Error(msg) {}
};

// Invalid configuration: bad parameters, mismatched form/quadruple,
// failed scenario validation.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace fixpoint
