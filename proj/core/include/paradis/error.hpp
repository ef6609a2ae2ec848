#pragma once

#include <stdexcept>
#include <string>

namespace paradis {

// Failure categories raised by the library. The command line tool maps
// these onto process exit codes, so additions here need a mapping there.
enum class ErrorKind {
    DimensionMismatch,
    NotHermitian,
    NotPositiveDefinite,
    ZeroMatrix,
    CapExceeded,
    AllZeroGenerators,
    NotHermitianClosed,
    NotDensityOperator,
    NotDistinguishable,
    InsufficientCopies,
    NegativeEntry,
    ParseError,
    InvalidArgument,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

const char* error_kind_name(ErrorKind kind) noexcept;

} // namespace paradis
