#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace planewave {

/// Machine-readable failure categories shared by the library and the CLI.
enum class ErrorCode {
  kOutOfDomain,
  kInvalidArgument,
  kNotSymmetric,
  kIntegrationFailure,
  kSingular,
  kPrecondition,
  kInconsistent,
  kSchema,
  kIo,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace planewave
