#include "phaseswap/error.hpp"

namespace phaseswap {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OddDimension: return "OddDimension";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonRealResult: return "NonRealResult";
    case ErrorCode::NegativeMagnitude: return "NegativeMagnitude";
    case ErrorCode::EmptyList: return "EmptyList";
    case ErrorCode::EmptyDirectory: return "EmptyDirectory";
    case ErrorCode::UnreadableImage: return "UnreadableImage";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace phaseswap
