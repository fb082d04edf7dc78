#pragma once

#include <stdexcept>
#include <string>

namespace psel {

// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File-level failures: missing or unreadable files, malformed content,
// short reads, bad magic bytes.  The CLI maps these to exit code 2.
class IoError : public Error {
 public:
  using Error::Error;
};

// Violated API preconditions: dimension mismatches, out-of-range
// parameters, inconsistent options.  The CLI maps these to exit code 1.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Input that is structurally valid but numerically unusable: zero-norm
// columns, zero kernel bandwidth, constant relevance vectors.
class DegenerateInputError : public ContractError {
 public:
  using ContractError::ContractError;
};

}  // namespace psel
