#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mdsp {

// Base of every error raised by the library. Callers that do not care about
// the specific failure can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MDSP_DEFINE_ERROR(Name)               \
  class Name : public Error {                 \
   public:                                    \
    using Error::Error;                       \
  }

MDSP_DEFINE_ERROR(DependentInput);
MDSP_DEFINE_ERROR(SingularMatrix);
MDSP_DEFINE_ERROR(NonSquare);
MDSP_DEFINE_ERROR(NotSPD);
MDSP_DEFINE_ERROR(LengthMismatch);
MDSP_DEFINE_ERROR(DegenerateFixedVector);
MDSP_DEFINE_ERROR(DegenerateResidual);
MDSP_DEFINE_ERROR(IndexOutOfRange);
MDSP_DEFINE_ERROR(DimensionCapExceeded);
MDSP_DEFINE_ERROR(SearchSpaceTooLarge);
MDSP_DEFINE_ERROR(InvalidArgument);
MDSP_DEFINE_ERROR(RankError);
MDSP_DEFINE_ERROR(InvariantViolation);

#undef MDSP_DEFINE_ERROR

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace mdsp
