#pragma once

#include <stdexcept>
#include <string>

namespace oscdecay {

/// Stable error categories. The numeric values line up with the CLI exit
/// codes and the C API status codes, so they must not be reordered.
enum class ErrorCode {
  invalid_argument = 1,
  parse = 2,
  guard = 3,
  ceiling = 4,
  internal = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace oscdecay
