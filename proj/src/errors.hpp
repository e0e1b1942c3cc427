#pragma once

#include <stdexcept>
#include <string>

namespace rsub {

/// Error categories surfaced across the C API boundary and mapped onto
/// process exit codes by the CLI (usage=1, data=2, non-convergence=3).
enum class ErrorKind {
  usage,     // bad arguments, violated call contracts
  data,      // unusable input data (parse failures, rank/shape problems)
  io,        // filesystem failures
  internal,  // broken internal invariants
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error usage_error(const std::string& msg) { return Error(ErrorKind::usage, msg); }
inline Error data_error(const std::string& msg) { return Error(ErrorKind::data, msg); }
inline Error io_error(const std::string& msg) { return Error(ErrorKind::io, msg); }
inline Error internal_error(const std::string& msg) { return Error(ErrorKind::internal, msg); }

}  // namespace rsub
