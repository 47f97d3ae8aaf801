#include "svfkit/error.hpp"

namespace svfkit {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput:
      return "invalid_input";
    case ErrorCode::InvalidAnchor:
      return "invalid_anchor";
    case ErrorCode::OutOfDomain:
      return "out_of_domain";
    case ErrorCode::CapExceeded:
      return "cap_exceeded";
    case ErrorCode::NonConvergence:
      return "non_convergence";
    case ErrorCode::EmptyFamily:
      return "empty_family";
    case ErrorCode::ParseError:
      return "parse_error";
  }
  return "unknown";
}

}  // namespace svfkit
