#pragma once

#include <stdexcept>
#include <string>

namespace knotforge {

/// Root of every exception the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidPath : public Error {
 public:
  using Error::Error;
};

class InvalidCommand : public Error {
 public:
  using Error::Error;
};

class NothingToUndo : public Error {
 public:
  NothingToUndo() : Error("nothing to undo") {}
};

class NothingToRedo : public Error {
 public:
  NothingToRedo() : Error("nothing to redo") {}
};

/// The six endpoint times of a crossing triple do not describe three pairwise-crossing strands.
class MalformedTriple : public Error {
 public:
  using Error::Error;
};

/// Arc enumeration failed, typically a crossing without a usable sign.
class DegenerateDiagram : public Error {
 public:
  using Error::Error;
};

/// A document does not match the JSON schema; pointer() names the offending field.
class SchemaViolation : public Error {
 public:
  SchemaViolation(std::string pointer, const std::string& what)
      : Error(pointer + ": " + what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

/// Stored crossings disagree with the crossings recomputed from the stored path.
class ImportMismatch : public Error {
 public:
  using Error::Error;
};

class TableFormatError : public Error {
 public:
  TableFormatError(std::size_t line, const std::string& what)
      : Error("knot table line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace knotforge
