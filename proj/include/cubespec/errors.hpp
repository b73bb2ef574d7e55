#pragma once

#include <stdexcept>
#include <string>

namespace cubespec {

// Caller passed something malformed: wrong side, mismatched dimensions,
// parameter out of its documented domain.
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

// The request is well-formed but exceeds a documented cap or budget.
class CapabilityError : public std::runtime_error {
 public:
  explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

// The LP solver could not certify its answer (cycling guard exhausted,
// duality residual too large, infeasible where feasibility was expected).
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

// A postcondition that should hold by theorem failed numerically. This is a
// bug signal, not a user error, and carries diagnostics in what().
class VerificationError : public std::runtime_error {
 public:
  explicit VerificationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cubespec
