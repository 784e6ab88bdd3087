#include "phaseswap/grid.hpp"

#include <cmath>

namespace phaseswap {

void validate(const RealImage& img, const char* what) {
  if (img.width() < 2 || img.height() < 2) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be at least 2x2, got " +
                                                std::to_string(img.width()) + "x" +
                                                std::to_string(img.height()));
  }
  for (double v : img) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, std::string(what) + " contains non-finite values");
    }
  }
}

void require_even(int width, int height, const char* what) {
  if (width % 2 != 0 || height % 2 != 0) {
    throw Error(ErrorCode::OddDimension, std::string(what) + " is " + std::to_string(width) + "x" +
                                             std::to_string(height) +
                                             "; both dimensions must be even");
  }
}

}  // namespace phaseswap
