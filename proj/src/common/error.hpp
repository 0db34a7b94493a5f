#pragma once

#include <stdexcept>
#include <string>

namespace lift {

enum class ErrorKind {
  Dimension,
  Rank,
  Index,
  Domain,
  Consistency,
  Config,
  Unsupported,
  Assembly,
  Parse,
  Io,
  Numeric,
};

const char* to_string(ErrorKind kind);

// Single exception type for the core; the C boundary maps `kind` onto status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  // Message without the kind prefix that what() carries.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace lift
