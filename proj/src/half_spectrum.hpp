#pragma once

#include <complex>

#include "fftw_util.hpp"
#include "phaseswap/fft.hpp"

namespace phaseswap::detail {

/// Columns 0..W/2 of the DC-centered spectrum of a real image. The remaining
/// columns are the conjugates of their mirror bins and are never stored.
struct HalfSpectrum {
  int width = 0;
  int height = 0;
  FftwBuffer data;

  int stride() const noexcept { return width / 2 + 1; }
  std::complex<double>* row(int y) noexcept {
    return as_complex(data.get()) + static_cast<std::size_t>(y) * stride();
  }
  const std::complex<double>* row(int y) const noexcept {
    return as_complex(data.get()) + static_cast<std::size_t>(y) * stride();
  }
};

HalfSpectrum forward_half(const RealImage& img);

/// Inverse of the conjugate-symmetric extension of half. The residual is
/// the one a full complex inverse of that extension would report. Consumes
/// the buffer.
InverseResult inverse_half(HalfSpectrum&& half);

}  // namespace phaseswap::detail
