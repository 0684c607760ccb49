#pragma once

#include <stdexcept>
#include <string>

namespace sh {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad JSON, bad rational, inconsistent field data.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// A mathematical precondition failed (rank deficiency, index range, ...).
class MathError : public Error {
 public:
  using Error::Error;
};

/// Lattice search exhausted its budget without finding an admissible point.
class NotFound : public Error {
 public:
  using Error::Error;
};

}  // namespace sh
