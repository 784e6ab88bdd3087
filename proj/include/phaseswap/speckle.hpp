#pragma once

#include <cstdint>
#include <vector>

#include "phaseswap/grid.hpp"

namespace phaseswap {

/// 2D phantom (lateral x axial), no elevation.
struct PhantomSpec {
  double width_mm = 50.0;  // lateral extent
  double depth_mm = 50.0;  // axial extent
  std::int64_t num_scatterers = 100'000;
  int grid_width = 256;
  int grid_height = 256;

  void validate() const;
};

struct Scatterer {
  double x_mm;  // lateral, [0, width_mm)
  double z_mm;  // axial, [0, depth_mm)
  double amplitude;

  friend bool operator==(const Scatterer&, const Scatterer&) = default;
};

struct ScattererField {
  std::vector<Scatterer> scatterers;

  friend bool operator==(const ScattererField&, const ScattererField&) = default;
};

/// Gaussian-windowed axial cosine: exp(-z^2/2sa^2) exp(-x^2/2sl^2) cos(2 pi f z).
struct PSFSpec {
  double center_freq_cyc_per_px = 0.25;
  double sigma_axial_px = 3.0;
  double sigma_lateral_px = 6.0;
  int half_extent_axial_px = 9;
  int half_extent_lateral_px = 18;

  /// Same sigmas and carrier with half extents set to ceil(3 sigma).
  static PSFSpec with_sigmas(double center_freq, double sigma_axial, double sigma_lateral);

  void validate() const;
};

inline constexpr double kDefaultDynamicRangeDb = 60.0;

/// Positions i.i.d. uniform over the phantom, amplitudes i.i.d. N(0, 1).
ScattererField sample_scatterers(const PhantomSpec& spec, std::uint64_t seed);

/// Pixel (column, row) a scatterer falls into under the linear mm -> pixel map.
struct PixelIndex {
  int x;
  int y;
};
PixelIndex scatterer_pixel(const Scatterer& s, const PhantomSpec& spec) noexcept;

/// Zeroes the amplitude of every scatterer landing in a mask pixel above 0.5.
ScattererField apply_anechoic_mask(const ScattererField& field, const RealImage& mask,
                                   const PhantomSpec& spec);

/// Sums amplitudes into their nearest pixel.
Grid<double> bin_scatterers(const ScattererField& field, const PhantomSpec& spec);

/// Sampled PSF, (2*lateral+1) wide and (2*axial+1) tall, centered.
Grid<double> psf_kernel(const PSFSpec& psf);

/// RF image: binned scatterers convolved (zero padded) with the PSF.
Grid<double> render_rf(const ScattererField& field, const PhantomSpec& spec, const PSFSpec& psf);

/// Magnitude of the analytic signal along each column (axial direction).
Grid<double> envelope(const Grid<double>& rf);

/// 20 log10(env / max) mapped from [-dynamic_range_db, 0] onto [0, 1].
RealImage log_compress(const Grid<double>& env, double dynamic_range_db = kDefaultDynamicRangeDb);

/// Envelope of the rendered RF image, before compression.
Grid<double> render_envelope(const ScattererField& field, const PhantomSpec& spec,
                             const PSFSpec& psf);

/// Full B-mode image in [0, 1].
RealImage render_bmode(const ScattererField& field, const PhantomSpec& spec, const PSFSpec& psf,
                       double dynamic_range_db = kDefaultDynamicRangeDb);

}  // namespace phaseswap
