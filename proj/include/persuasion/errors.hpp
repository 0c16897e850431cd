#pragma once

#include <stdexcept>
#include <string>

namespace persuasion {

// Malformed input: bad shapes, out-of-range indices, unparsable files.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input is well formed but an operation's precondition does not hold
// (e.g. an independence-only solver called on a joint prior).
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The LP solver gave up (iteration cap).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A result that can only arise from a bug, e.g. an infeasible obedience LP.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace persuasion
