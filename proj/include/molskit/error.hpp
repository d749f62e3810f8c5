#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace molskit {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (cycle notation, dataset files, matrices).
class ParseError : public Error {
public:
  using Error::Error;
};

/// Operands of different degree/order were combined.
class DegreeMismatch : public Error {
public:
  using Error::Error;
};

/// A structural check failed; the message names a witness.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// An enumeration hit its configured size limit.
class LimitExceeded : public Error {
public:
  LimitExceeded(const std::string& what, std::size_t partial)
      : Error(what), partial_count(partial) {}

  std::size_t partial_count;
};

}  // namespace molskit
