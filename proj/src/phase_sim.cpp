#include "phaseswap/phase_sim.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "half_spectrum.hpp"

namespace phaseswap {

AlphaParam::AlphaParam(double value) : value_(value) {
  if (!(value >= 0.0 && value <= kMax)) {
    throw Error(ErrorCode::InvalidArgument,
                "alpha must lie in [0, sqrt(2)], got " + std::to_string(value));
  }
}

std::size_t PhaseMask::popcount() const noexcept {
  return static_cast<std::size_t>(std::count(begin(), end(), std::uint8_t{1}));
}

PhaseMask build_lowfreq_mask(int width, int height, AlphaParam alpha) {
  if (width < 2 || height < 2) {
    throw Error(ErrorCode::InvalidArgument, "mask must be at least 2x2");
  }
  require_even(width, height, "mask");
  PhaseMask mask(width, height, 0);
  const double a = alpha.value();
  if (a == 0.0) return mask;

  const double cx = width / 2.0;
  const double cy = height / 2.0;
  const double rx = a * width / 2.0;
  const double ry = a * height / 2.0;
  const double rx2 = rx * rx;
  const double ry2 = ry * ry;
  for (int y = 0; y < height; ++y) {
    const double dy = y - cy;
    const double ty = dy * dy / ry2;
    for (int x = 0; x < width; ++x) {
      const double dx = x - cx;
      if (dx * dx / rx2 + ty <= 1.0) mask(x, y) = 1;
    }
  }
  return mask;
}

Grid<double> blend_phase(const Grid<double>& phase_real, const Grid<double>& phase_mask_img,
                         const PhaseMask& mask) {
  require_same_shape(phase_real, phase_mask_img, "phase grids");
  require_same_shape(phase_real, mask, "phase grid vs mask");
  Grid<double> out = phase_real;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (mask.data()[i] != 0) out.data()[i] = phase_mask_img.data()[i];
  }
  return out;
}

RealImage normalize_output(const RealImage& img) {
  validate(img);
  const auto [lo, hi] = std::minmax_element(img.begin(), img.end());
  const double min = *lo;
  const double range = *hi - min;
  RealImage out(img.width(), img.height(), 0.0);
  if (range <= 0.0) return out;
  for (std::size_t i = 0; i < img.size(); ++i) {
    // Clamp guards against 1 + ulp from the division.
    out.data()[i] = std::clamp((img.data()[i] - min) / range, 0.0, 1.0);
  }
  return out;
}

SimulationResult simulate_raw(const RealImage& real_img, const RealImage& mask_img,
                              const PhaseMask& mask) {
  validate(real_img, "real image");
  validate(mask_img, "mask image");
  require_same_shape(real_img, mask_img, "real image vs mask image");
  require_even(real_img.width(), real_img.height());
  require_same_shape(real_img, mask, "image vs phase mask");

  // Equivalent to blend_phase on both polar spectra, applied to the stored
  // half only. Unselected bins keep their exact values.
  auto spec = detail::forward_half(real_img);
  const auto source = detail::forward_half(mask_img);
  const int stride = spec.stride();
  for (int y = 0; y < spec.height; ++y) {
    auto* row = spec.row(y);
    const auto* src = source.row(y);
    for (int x = 0; x < stride; ++x) {
      if (mask(x, y) == 0) continue;
      const double magnitude = std::abs(row[x]);
      const double r = std::abs(src[x]);
      row[x] = r > 0.0 ? src[x] * (magnitude / r) : std::complex<double>(magnitude, 0.0);
    }
  }

  auto inv = detail::inverse_half(std::move(spec));
  if (inv.max_imag_residual > kNonRealTolerance * inv.max_real_magnitude) {
    throw Error(ErrorCode::NonRealResult,
                "phase substitution produced a non-real image; the mask is not centro-symmetric");
  }
  return {std::move(inv.image), inv.max_imag_residual, inv.max_real_magnitude};
}

SimulationResult simulate_raw(const RealImage& real_img, const RealImage& mask_img,
                              AlphaParam alpha) {
  validate(real_img, "real image");
  require_even(real_img.width(), real_img.height());
  return simulate_raw(real_img, mask_img,
                      build_lowfreq_mask(real_img.width(), real_img.height(), alpha));
}

RealImage simulate(const RealImage& real_img, const RealImage& mask_img, AlphaParam alpha) {
  return normalize_output(simulate_raw(real_img, mask_img, alpha).raw);
}

RealImage phase_source_from_mask(const RealImage& binary_mask, bool invert) {
  RealImage out(binary_mask.width(), binary_mask.height());
  std::transform(binary_mask.begin(), binary_mask.end(), out.begin(),
                 [invert](double v) { return invert ? v : 1.0 - v; });
  return out;
}

}  // namespace phaseswap
