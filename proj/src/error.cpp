#include "planewave/error.hpp"

namespace planewave {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOutOfDomain: return "out_of_domain";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kNotSymmetric: return "not_symmetric";
    case ErrorCode::kIntegrationFailure: return "integration_failure";
    case ErrorCode::kSingular: return "singular";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kInconsistent: return "inconsistent";
    case ErrorCode::kSchema: return "schema";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace planewave
