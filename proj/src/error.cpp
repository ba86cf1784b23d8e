#include "ocular/error.hpp"

namespace ocular {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::ZeroChannelMean: return "ZeroChannelMean";
    case ErrorCode::ConstantImage: return "ConstantImage";
    case ErrorCode::NoCircleFound: return "NoCircleFound";
    case ErrorCode::InsufficientSclera: return "InsufficientSclera";
    case ErrorCode::NoLandmarks: return "NoLandmarks";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::EmptyBaseline: return "EmptyBaseline";
    case ErrorCode::NonPositiveDuration: return "NonPositiveDuration";
    case ErrorCode::ZeroLatency: return "ZeroLatency";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NoIrisFound: return "NoIrisFound";
    case ErrorCode::NonMonotonicTimestamps: return "NonMonotonicTimestamps";
    case ErrorCode::DegenerateTimeAxis: return "DegenerateTimeAxis";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::NonMonotonicFrames: return "NonMonotonicFrames";
    case ErrorCode::ConsentRequired: return "ConsentRequired";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::StoreFailure: return "StoreFailure";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::string detail)
    : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

}  // namespace ocular
