#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nls {

enum class ErrorKind {
  InvalidInput,
  NoGroundState,
  ConvergenceFailure,
  UnsupportedRegime,
  PreconditionViolation,
  BoundaryLeakage,
  FormatError,
  UnsupportedVersion,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::NoGroundState: return "no-ground-state";
    case ErrorKind::ConvergenceFailure: return "convergence-failure";
    case ErrorKind::UnsupportedRegime: return "unsupported-regime";
    case ErrorKind::PreconditionViolation: return "precondition-violation";
    case ErrorKind::BoundaryLeakage: return "boundary-leakage";
    case ErrorKind::FormatError: return "format-error";
    case ErrorKind::UnsupportedVersion: return "unsupported-version";
  }
  return "unknown";
}

/// Base exception for every failure raised by the library. The kind lets
/// callers (the CLI, the sweep harness) branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by the checkpoint reader; carries the byte offset of the problem.
class FormatError : public Error {
 public:
  FormatError(ErrorKind kind, const std::string& what, std::uint64_t offset)
      : Error(kind, what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace nls
