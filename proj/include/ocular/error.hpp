#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ocular {

// Every failure the engine can report. The names are part of the wire
// contract: they appear verbatim in HTTP error bodies and CLI output.
enum class ErrorCode {
  InvalidArgument,
  InvalidSpec,
  ZeroChannelMean,
  ConstantImage,
  NoCircleFound,
  InsufficientSclera,
  NoLandmarks,
  TooShort,
  EmptyBaseline,
  NonPositiveDuration,
  ZeroLatency,
  NoConvergence,
  NoIrisFound,
  NonMonotonicTimestamps,
  DegenerateTimeAxis,
  UnsupportedFormat,
  CorruptFile,
  SchemaViolation,
  NonMonotonicFrames,
  ConsentRequired,
  ValidationFailed,
  NotFound,
  DuplicateId,
  StoreFailure,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  // `detail` carries the offending field name (ValidationFailed) or the
  // 1-based line number (SchemaViolation); empty otherwise.
  Error(ErrorCode code, const std::string& message, std::string detail = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace ocular
