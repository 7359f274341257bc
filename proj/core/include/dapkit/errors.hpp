#pragma once

#include <stdexcept>
#include <string>

namespace dapkit {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text; carries a 1-based line number when known.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// A value violates a documented field-level invariant.  `field` names the
/// offending key so config errors point at the exact entry.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& field, const std::string& msg)
      : Error(field + ": " + msg), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Numeric argument outside the operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Structurally incompatible inputs (mismatched cells, atom lists, ...).
class StructureError : public Error {
 public:
  using Error::Error;
};

/// A resource guard fired (enumeration radius, level caps, grid capture).
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Least-squares problem is rank deficient or under-determined.
class FitError : public Error {
 public:
  using Error::Error;
};

/// A referenced name is not present in a database or table.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// File could not be opened or read.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dapkit
