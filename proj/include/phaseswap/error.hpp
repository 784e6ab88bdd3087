#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace phaseswap {

enum class ErrorCode {
  InvalidArgument,
  OddDimension,
  DimensionMismatch,
  NonRealResult,
  NegativeMagnitude,
  EmptyList,
  EmptyDirectory,
  UnreadableImage,
  IoFailure,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for codes caused by the file system rather than by bad values.
constexpr bool is_io_error(ErrorCode code) noexcept {
  return code == ErrorCode::EmptyDirectory || code == ErrorCode::UnreadableImage ||
         code == ErrorCode::IoFailure;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace phaseswap
