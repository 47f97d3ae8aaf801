#pragma once

#include <stdexcept>
#include <string>

namespace svfkit {

// Machine-readable error codes. The CLI serializes `code()` into reports.
enum class ErrorCode {
  InvalidInput,
  InvalidAnchor,
  OutOfDomain,
  CapExceeded,
  NonConvergence,
  EmptyFamily,
  ParseError,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class CapExceededError : public Error {
 public:
  CapExceededError(const std::string& what, std::size_t cap, std::size_t produced)
      : Error(ErrorCode::CapExceeded,
              what + ": enumeration cap " + std::to_string(cap) + " exceeded (partial result has " +
                  std::to_string(produced) + " items)"),
        cap_(cap),
        produced_(produced) {}

  std::size_t cap() const noexcept { return cap_; }
  std::size_t produced() const noexcept { return produced_; }

 private:
  std::size_t cap_;
  std::size_t produced_;
};

class NonConvergenceError : public Error {
 public:
  // `witness_x` is where the oscillation was observed, `witness_gap` its size.
  NonConvergenceError(const std::string& message, double witness_x, double witness_gap)
      : Error(ErrorCode::NonConvergence, message), witness_x_(witness_x), witness_gap_(witness_gap) {}

  double witness_x() const noexcept { return witness_x_; }
  double witness_gap() const noexcept { return witness_gap_; }

 private:
  double witness_x_;
  double witness_gap_;
};

}  // namespace svfkit
