#pragma once

#include <numbers>

#include "phaseswap/fft.hpp"
#include "phaseswap/grid.hpp"

namespace phaseswap {

/// Fraction of the half-spectrum extent whose phase gets replaced.
/// Valid range is [0, sqrt(2)]; sqrt(2) reaches the spectrum corners.
class AlphaParam {
 public:
  static constexpr double kMax = std::numbers::sqrt2;
  static constexpr double kDefault = 0.11;

  constexpr AlphaParam() = default;
  explicit AlphaParam(double value);

  constexpr double value() const noexcept { return value_; }

 private:
  double value_ = kDefault;
};

/// Binary DC-centered mask selecting the low-frequency ellipse.
class PhaseMask : public Grid<std::uint8_t> {
 public:
  using Grid<std::uint8_t>::Grid;

  std::size_t popcount() const noexcept;
};

/// Bin (x, y) is set iff (x - W/2)^2 / (aW/2)^2 + (y - H/2)^2 / (aH/2)^2 <= 1.
/// alpha == 0 gives the empty mask.
PhaseMask build_lowfreq_mask(int width, int height, AlphaParam alpha);

/// Picks phase_mask_img where the mask is set and phase_real elsewhere.
Grid<double> blend_phase(const Grid<double>& phase_real, const Grid<double>& phase_mask_img,
                         const PhaseMask& mask);

/// Affine min-max map to [0, 1]; a constant image maps to all zeros.
RealImage normalize_output(const RealImage& img);

struct SimulationResult {
  RealImage raw;            // inverse transform before normalization
  double max_imag_residual; // from the inverse transform
  double max_real_magnitude;
};

/// Keeps the magnitude of real_img and swaps in the phase of mask_img inside
/// the low-frequency ellipse. Returns the unnormalized output.
SimulationResult simulate_raw(const RealImage& real_img, const RealImage& mask_img,
                              AlphaParam alpha = AlphaParam{});

/// Same as simulate_raw with a prebuilt mask, for callers reusing one mask
/// across many images of the same size.
SimulationResult simulate_raw(const RealImage& real_img, const RealImage& mask_img,
                              const PhaseMask& mask);

/// Full method: phase substitution followed by normalize_output.
RealImage simulate(const RealImage& real_img, const RealImage& mask_img,
                   AlphaParam alpha = AlphaParam{});

/// Turns a binary lesion mask (lesion = 1) into the image whose phase is
/// substituted. Lesions are anechoic, so by default the lesion becomes 0 and
/// the background 1; invert keeps the file's polarity.
RealImage phase_source_from_mask(const RealImage& binary_mask, bool invert = false);

}  // namespace phaseswap
