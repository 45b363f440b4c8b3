#pragma once

#include <stdexcept>
#include <string>

namespace owf {

enum class ErrorCode {
  InvalidParameter,
  InvalidWindow,
  DegenerateInput,
  DimensionMismatch,
  MalformedHeader,
  UnsupportedFormat,
  FileNotFound,
  IoFailure,
};

const char* to_string(ErrorCode code);

/// Every failure in the library is reported through this exception; code()
/// distinguishes the cases callers are expected to handle separately.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace owf
