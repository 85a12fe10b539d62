#ifndef SUPERFRM_ERROR_HPP
#define SUPERFRM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace superfrm {

enum class ErrorCode {
  EmptyPartition,
  NonPositiveBlock,
  CutOutOfRange,
  DuplicateCut,
  BlockIndexOutOfRange,
  DimensionMismatch,
  IndexOutOfRange,
  StepLimitExceeded,
  StateSpaceTooLarge,
  UnknownLabel,
  WrongSide,
  SyntaxError,
  SchemaError,
  ValidationError,
  UnknownFixture,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace superfrm

#endif // SUPERFRM_ERROR_HPP
