#pragma once

#include <stdexcept>
#include <string>

namespace svmver {

enum class ErrorCode {
  kIo = 1,
  kParse,
  kDimension,
  kConstraint,
  kInvalidArgument,
};

// Thrown by every core routine; the C API maps `code()` onto svmver_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void RequireWidth(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    Fail(ErrorCode::kDimension, std::string(what) + ": width " + std::to_string(got) +
                                    ", expected " + std::to_string(want));
  }
}

}  // namespace svmver
