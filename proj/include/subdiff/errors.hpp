#pragma once

#include <stdexcept>
#include <string>

namespace subdiff {

/// Raised for invalid parameters, malformed configs, and contract violations
/// that are detectable before any numerics run.  CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a numerical procedure fails: superconvergence condition
/// violated, fixed-point divergence, CG non-convergence, kernel identity
/// residual too large, NaN/Inf in a solution vector.  CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised for file-system failures (unreadable config, unwritable output).
/// CLI exit code 3.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace subdiff
