#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rbfmorph {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define RBFMORPH_DEFINE_ERROR(Name)          \
  class Name : public Error {                \
   public:                                   \
    using Error::Error;                      \
  }

RBFMORPH_DEFINE_ERROR(InvalidArgument);
RBFMORPH_DEFINE_ERROR(DuplicateNodes);
RBFMORPH_DEFINE_ERROR(NotPositiveDefinite);
RBFMORPH_DEFINE_ERROR(DimensionMismatch);
RBFMORPH_DEFINE_ERROR(EmptySupportSet);
RBFMORPH_DEFINE_ERROR(InvalidGroupCount);
RBFMORPH_DEFINE_ERROR(UnknownIndex);
RBFMORPH_DEFINE_ERROR(EmptyGroup);
RBFMORPH_DEFINE_ERROR(TooFewBoundaryNodes);
RBFMORPH_DEFINE_ERROR(SelectionStalled);
RBFMORPH_DEFINE_ERROR(InvalidCount);
RBFMORPH_DEFINE_ERROR(DegenerateCell);
RBFMORPH_DEFINE_ERROR(SourceMismatch);
RBFMORPH_DEFINE_ERROR(MissingNode);
RBFMORPH_DEFINE_ERROR(DuplicateNode);

#undef RBFMORPH_DEFINE_ERROR

// Text-format errors carry the 1-based line (and column when known).
class LocatedError : public Error {
 public:
  LocatedError(std::size_t line, std::size_t column, const std::string& message)
      : Error(format(line, column, message)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(std::size_t line, std::size_t column, const std::string& message) {
    std::string out = "line " + std::to_string(line);
    if (column > 0) out += ", column " + std::to_string(column);
    return out + ": " + message;
  }

  std::size_t line_;
  std::size_t column_;
};

class ParseError : public LocatedError {
 public:
  using LocatedError::LocatedError;
};

class InvariantViolation : public LocatedError {
 public:
  using LocatedError::LocatedError;
};

}  // namespace rbfmorph
