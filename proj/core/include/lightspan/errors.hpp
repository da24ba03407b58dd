#pragma once

#include <stdexcept>
#include <string>

namespace lightspan {

/// Malformed or out-of-contract input (bad vertex id, eps <= 0, parse failure).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A certificate object (charging path, decomposition, scheme) is internally
/// inconsistent with the graph it claims to describe.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A construction invariant failed; indicates a bug, never bad input.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace lightspan
