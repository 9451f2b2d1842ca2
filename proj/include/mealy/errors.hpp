#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mealy {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual or structured input.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An operation was called on a machine that does not satisfy its
/// precondition (e.g. inverting a non-invertible machine).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A configured size or work limit would be exceeded.
class LimitError : public Error {
 public:
  using Error::Error;
};

/// Maximum number of states/nodes for power automata and helix graphs.
/// Read once from MEALY_SIZE_LIMIT; defaults to 2^22.
std::size_t size_limit();

}  // namespace mealy
