#include "common/error.hpp"

namespace lift {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Dimension: return "dimension error";
    case ErrorKind::Rank: return "rank error";
    case ErrorKind::Index: return "index error";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Consistency: return "consistency error";
    case ErrorKind::Config: return "configuration error";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Assembly: return "assembly error";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Io: return "i/o error";
    case ErrorKind::Numeric: return "numeric error";
  }
  return "error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), message_(message) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace lift
