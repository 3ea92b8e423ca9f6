#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hilbert {

enum class ErrorCode {
  kInvalidInput,
  kDimensionMismatch,
  kNotCoregular,
  kIndexOutOfRange,
  kNotPositiveSemidefinite,
  kNotInImage,
  kZeroVector,
  kNotSpecialOrthogonal,
  kNotEulerForm,
  kDegenerateAngles,
  kBoundaryPoint,
  kDomainError,
  kUnsupportedDecayClass,
  kQuadratureUnavailable,
  kRegistrationError,
};

/// Machine-parsable name of an error code, e.g. "NotCoregular".
std::string_view to_string(ErrorCode code);

/// True for codes that describe a numerical outcome (a point outside the
/// image, a degenerate rotation, ...) rather than malformed input.
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hilbert
