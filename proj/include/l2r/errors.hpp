#pragma once

#include <stdexcept>
#include <string>

namespace l2r {

// Base for all data-level failures (bad files, unknown ids, invalid paths).
class Error : public std::runtime_error {
public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

// Raised when a source/destination pair cannot be connected.
class NoPathError : public Error {
public:
  explicit NoPathError(const std::string &msg) : Error(msg) {}
};

// Raised when the iterative linear solver fails to reach its tolerance.
class SolverError : public Error {
public:
  SolverError(const std::string &msg, double residual, int iterations)
      : Error(msg), residual(residual), iterations(iterations) {}
  double residual;
  int iterations;
};

} // namespace l2r
