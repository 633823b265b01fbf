#pragma once

#include <stdexcept>
#include <string>

namespace mdlab {

// Caller passed arguments that violate an operation's contract.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// u_C v^C = 0 somewhere: the polar decomposition does not exist.
struct DegeneracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A diagnostic was asked for outside the hypotheses it is built on.
struct InapplicableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Not enough samples, range, or angular resolution for a fit.
struct InsufficientDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// No decaying solution exists for the requested energy.
struct SpectralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A file could not be read or written.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mdlab
