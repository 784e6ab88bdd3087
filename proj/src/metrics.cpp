#include "phaseswap/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace phaseswap {

BinaryMask BinaryMask::from_image(const RealImage& img, double threshold) {
  BinaryMask mask(img.width(), img.height(), 0);
  std::transform(img.begin(), img.end(), mask.begin(),
                 [threshold](double v) { return static_cast<std::uint8_t>(v > threshold); });
  return mask;
}

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(begin(), end(), [](std::uint8_t v) { return v != 0; }));
}

double dsc(const BinaryMask& s, const BinaryMask& s_hat, double epsilon) {
  require_same_shape(s, s_hat, "dsc masks");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::InvalidArgument, "dsc epsilon must be positive");
  }
  std::size_t intersection = 0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const bool a = s.data()[i] != 0;
    const bool b = s_hat.data()[i] != 0;
    intersection += static_cast<std::size_t>(a && b);
    total += static_cast<std::size_t>(a) + static_cast<std::size_t>(b);
  }
  return (2.0 * static_cast<double>(intersection) + epsilon) /
         (static_cast<double>(total) + epsilon);
}

}  // namespace phaseswap
