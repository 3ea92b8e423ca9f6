#include "hilbert/error.hpp"

namespace hilbert {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNotCoregular: return "NotCoregular";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kNotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case ErrorCode::kNotInImage: return "NotInImage";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kNotSpecialOrthogonal: return "NotSpecialOrthogonal";
    case ErrorCode::kNotEulerForm: return "NotEulerForm";
    case ErrorCode::kDegenerateAngles: return "DegenerateAngles";
    case ErrorCode::kBoundaryPoint: return "BoundaryPoint";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kUnsupportedDecayClass: return "UnsupportedDecayClass";
    case ErrorCode::kQuadratureUnavailable: return "QuadratureUnavailable";
    case ErrorCode::kRegistrationError: return "RegistrationError";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotPositiveSemidefinite:
    case ErrorCode::kNotInImage:
    case ErrorCode::kZeroVector:
    case ErrorCode::kNotSpecialOrthogonal:
    case ErrorCode::kNotEulerForm:
    case ErrorCode::kDegenerateAngles:
    case ErrorCode::kBoundaryPoint:
    case ErrorCode::kDomainError:
      return true;
    default:
      return false;
  }
}

}  // namespace hilbert
