#pragma once

#include <stdexcept>
#include <string>

namespace conic {

// Market data violates a calibration hypothesis (quote ordering, or the
// range conditions that make the bootstrap / two-price system solvable).
class AssumptionError : public std::runtime_error {
  public:
    explicit AssumptionError(const std::string& what) : std::runtime_error(what) {}
};

// A root-finder lost its bracket or failed to converge.
class SolverError : public std::runtime_error {
  public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file.
class ParseError : public std::runtime_error {
  public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace conic
