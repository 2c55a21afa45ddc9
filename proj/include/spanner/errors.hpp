#pragma once

#include <stdexcept>

namespace spanner {

// Invalid user-facing parameter (k out of range, p outside [0,1], ...).
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input violates an operation's precondition.
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace spanner
