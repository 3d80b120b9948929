#pragma once

#include <stdexcept>
#include <string>

namespace dirichlet {

enum class ErrorCode {
  InvalidArgument = 1,
  DomainTooSmall,
  ZeroDistance,
  GridMismatch,
  NotConverged,
  Stalled,
  Io,
};

/// Base exception for every failure raised by the library. The C API maps
/// `code()` onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorCode::InvalidArgument, message);
}

}  // namespace dirichlet
