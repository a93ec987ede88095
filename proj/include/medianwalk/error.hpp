#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mw {

// Numeric values are part of the C API (see medianwalk.h) and must not change.
enum class ErrorCode : int {
  Ok = 0,
  InvalidArgument = 1,
  NotConnected = 2,
  NotMedian = 3,
  NotBipartite = 4,
  VertexOutOfRange = 5,
  SizeBudgetExceeded = 6,
  WallOutOfRange = 7,
  IntegrityFailure = 8,
  NotFound = 9,
  ChainInvalid = 10,
  Disconnected = 11,
  UnknownGenerator = 12,
  DefiningGraphMismatch = 13,
  PieceMismatch = 14,
  RadiusZero = 15,
  BudgetExceeded = 16,
  ProbSumInvalid = 17,
  NotGenerating = 18,
  TooFewTrials = 19,
  ParseError = 20,
  SchemaViolation = 21,
  FileMissing = 22,
  IoError = 23,
  Internal = 99,
};

const char* error_code_name(ErrorCode code) noexcept;

// Every failure raised by the library. `witness` carries machine-readable
// data for the codes that have it (e.g. the offending vertex triple for
// NotMedian); `detail` carries a key or generator name.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string detail = {},
        std::vector<std::int64_t> witness = {})
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        detail_(std::move(detail)),
        witness_(std::move(witness)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  const std::vector<std::int64_t>& witness() const noexcept { return witness_; }

 private:
  ErrorCode code_;
  std::string detail_;
  std::vector<std::int64_t> witness_;
};

}  // namespace mw
