#pragma once

#include <stdexcept>
#include <string>

namespace vargc {

/// Thrown when inputs violate a documented precondition (shape, length,
/// parameter range, malformed file).  Maps to CLI exit code 2.
struct InvalidInput : std::invalid_argument {
    explicit InvalidInput(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Thrown when a computation fails numerically (divergence, non-finite
/// iterates, singular system without a safe fallback).  Maps to CLI exit
/// code 3.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace vargc
