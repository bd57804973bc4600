#pragma once

#include <stdexcept>
#include <string>

namespace qac {

// Base class for all library errors. Subclasses map onto the CLI exit
// contract: input/parameter problems (2), infeasible problems (1), and
// internal invariant breaches (3).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or out-of-range constructor/operation arguments.
class InvalidParameterError : public Error {
 public:
  using Error::Error;
};

// An operation was evaluated outside its mathematical domain
// (e.g., an increment at l = 0, or across two infinite values).
class DomainError : public Error {
 public:
  using Error::Error;
};

// No subset of the given coins has exactly the requested total width.
class InfeasibleWidthError : public Error {
 public:
  using Error::Error;
};

// The length limit is too small to admit any prefix code for n symbols.
class InfeasibleLimitError : public Error {
 public:
  using Error::Error;
};

// The cost function lacks a property the invoked engine requires.
class UnsupportedPenaltyError : public Error {
 public:
  using Error::Error;
};

// A node multiset is not a valid code nodeset (column prefixes).
class InvalidNodesetError : public Error {
 public:
  using Error::Error;
};

// A length vector violates the Kraft inequality or basic sanity.
class InvalidLengthsError : public Error {
 public:
  using Error::Error;
};

// An internal invariant failed; callers must treat this as a bug, never
// repair silently.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

// An exhaustive oracle was asked to run beyond its configured size cap.
class CapExceededError : public Error {
 public:
  using Error::Error;
};

// A problem with an input file; carries a 1-based line number when known.
class InputError : public Error {
 public:
  InputError(const std::string& msg, long line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_ = 0;
};

}  // namespace qac
