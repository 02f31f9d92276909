#pragma once

#include <stdexcept>
#include <string>

namespace fave {

// Base class for all library errors. Each subclass maps to a distinct CLI
// exit code (see tools/fave.cc).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidLinkId : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Malformed input file. `where` is a JSON pointer-ish path or a line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : Error(where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

// An importance distribution assigns zero mass to a configuration the
// target distribution can produce with R(x)=1.
class SupportError : public Error {
 public:
  using Error::Error;
};

// Exponential oracle or inclusion-exclusion cap exceeded.
class LimitExceeded : public Error {
 public:
  using Error::Error;
};

// The routing indicator violates a structural assumption (e.g. failure
// monotonicity) that the SEED machinery depends on.
class ModelError : public Error {
 public:
  using Error::Error;
};

}  // namespace fave
