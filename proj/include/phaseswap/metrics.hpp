#pragma once

#include "phaseswap/grid.hpp"

namespace phaseswap {

/// {0,1} segmentation mask.
class BinaryMask : public Grid<std::uint8_t> {
 public:
  using Grid<std::uint8_t>::Grid;

  /// Thresholds at `threshold` (strictly greater is foreground).
  static BinaryMask from_image(const RealImage& img, double threshold = 0.5);

  std::size_t count() const noexcept;
};

inline constexpr double kDefaultDiceEpsilon = 1e-6;

/// Smoothed Dice coefficient (2|S n S'| + eps) / (|S| + |S'| + eps).
double dsc(const BinaryMask& s, const BinaryMask& s_hat, double epsilon = kDefaultDiceEpsilon);

}  // namespace phaseswap
