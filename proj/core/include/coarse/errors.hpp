#pragma once

#include <stdexcept>
#include <string>

namespace coarse {

// Error taxonomy mirrors the CLI exit codes: validation problems exit with 2,
// solver failures with 3, certification failures with 4.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input: bad spec fields, out-of-domain arguments, expressions that
// do not parse or evaluate.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : ValidationError(what + " (at position " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

class EvalError : public ValidationError {
 public:
  explicit EvalError(const std::string& what) : ValidationError(what) {}
};

// A solver could not produce a valid solution: non-convergence, collapsed
// intervals, infeasible partitions, MPC violations.
class SolverError : public Error {
 public:
  explicit SolverError(const std::string& what) : Error(what) {}
};

// A solution was produced but could not be certified (extreme fixed points
// disagree and no oracle confirmation was requested).
class CertificationError : public Error {
 public:
  explicit CertificationError(const std::string& what) : Error(what) {}
};

}  // namespace coarse
