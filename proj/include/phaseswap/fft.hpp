#pragma once

#include "phaseswap/grid.hpp"

namespace phaseswap {

/// Unnormalized 2D DFT of a real image, returned DC-centered.
/// Throws OddDimension when either side is odd.
Spectrum forward_transform(const RealImage& img);

struct InverseResult {
  RealImage image;               // real part of the inverse transform
  double max_imag_residual = 0;  // max |imag| over all pixels
  double max_real_magnitude = 0; // max |real| over all pixels
};

/// Inverse DFT (carries the 1/(W*H) factor) of a DC-centered spectrum,
/// reporting the imaginary residual instead of rejecting it.
InverseResult inverse_transform_with_residual(const Spectrum& spec);

/// Inverse DFT returning the real part. Throws NonRealResult when the
/// imaginary residual exceeds 1e-6 of the largest real magnitude, which
/// means the spectrum was not Hermitian.
RealImage inverse_transform(const Spectrum& spec);

inline constexpr double kNonRealTolerance = 1e-6;

/// Per-bin modulus and principal argument in (-pi, pi]; zero bins get phase 0.
PolarSpectrum to_polar(const Spectrum& spec);

/// Per-bin magnitude * exp(i * phase). Throws NegativeMagnitude on any
/// magnitude below zero and DimensionMismatch on differing grids.
Spectrum from_polar(const PolarSpectrum& polar);

/// Index of the conjugate partner of a DC-centered bin, (W - x) mod W.
constexpr int mirror_index(int i, int n) noexcept { return (n - i) % n; }

}  // namespace phaseswap
