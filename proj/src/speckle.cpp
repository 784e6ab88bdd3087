#include "phaseswap/speckle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fftw_util.hpp"
#include "phaseswap/rng.hpp"

namespace phaseswap {

void PhantomSpec::validate() const {
  if (!(width_mm > 0.0) || !(depth_mm > 0.0) || !std::isfinite(width_mm) ||
      !std::isfinite(depth_mm)) {
    throw Error(ErrorCode::InvalidArgument, "phantom extents must be positive");
  }
  if (num_scatterers < 0) {
    throw Error(ErrorCode::InvalidArgument, "scatterer count must be nonnegative");
  }
  if (grid_width < 2 || grid_height < 2) {
    throw Error(ErrorCode::InvalidArgument, "phantom grid must be at least 2x2");
  }
  require_even(grid_width, grid_height, "phantom grid");
}

PSFSpec PSFSpec::with_sigmas(double center_freq, double sigma_axial, double sigma_lateral) {
  PSFSpec psf;
  psf.center_freq_cyc_per_px = center_freq;
  psf.sigma_axial_px = sigma_axial;
  psf.sigma_lateral_px = sigma_lateral;
  psf.half_extent_axial_px = static_cast<int>(std::ceil(3.0 * sigma_axial));
  psf.half_extent_lateral_px = static_cast<int>(std::ceil(3.0 * sigma_lateral));
  return psf;
}

void PSFSpec::validate() const {
  if (!(sigma_axial_px > 0.0) || !(sigma_lateral_px > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "PSF widths must be positive");
  }
  if (!std::isfinite(center_freq_cyc_per_px)) {
    throw Error(ErrorCode::InvalidArgument, "PSF carrier frequency must be finite");
  }
  if (half_extent_axial_px < 3.0 * sigma_axial_px ||
      half_extent_lateral_px < 3.0 * sigma_lateral_px) {
    throw Error(ErrorCode::InvalidArgument, "PSF kernel must extend at least 3 sigma");
  }
}

ScattererField sample_scatterers(const PhantomSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  ScattererField field;
  field.scatterers.reserve(static_cast<std::size_t>(spec.num_scatterers));
  for (std::int64_t i = 0; i < spec.num_scatterers; ++i) {
    const double x = rng.uniform01() * spec.width_mm;
    const double z = rng.uniform01() * spec.depth_mm;
    field.scatterers.push_back({x, z, rng.normal()});
  }
  return field;
}

PixelIndex scatterer_pixel(const Scatterer& s, const PhantomSpec& spec) noexcept {
  const auto to_index = [](double pos, double extent, int n) {
    const auto i = static_cast<int>(std::floor(pos / extent * n));
    return std::clamp(i, 0, n - 1);
  };
  return {to_index(s.x_mm, spec.width_mm, spec.grid_width),
          to_index(s.z_mm, spec.depth_mm, spec.grid_height)};
}

ScattererField apply_anechoic_mask(const ScattererField& field, const RealImage& mask,
                                   const PhantomSpec& spec) {
  if (mask.width() != spec.grid_width || mask.height() != spec.grid_height) {
    throw Error(ErrorCode::DimensionMismatch,
                "anechoic mask is " + std::to_string(mask.width()) + "x" +
                    std::to_string(mask.height()) + ", phantom grid is " +
                    std::to_string(spec.grid_width) + "x" + std::to_string(spec.grid_height));
  }
  ScattererField out = field;
  for (auto& s : out.scatterers) {
    const auto p = scatterer_pixel(s, spec);
    if (mask(p.x, p.y) > 0.5) s.amplitude = 0.0;
  }
  return out;
}

Grid<double> bin_scatterers(const ScattererField& field, const PhantomSpec& spec) {
  Grid<double> bins(spec.grid_width, spec.grid_height, 0.0);
  for (const auto& s : field.scatterers) {
    const auto p = scatterer_pixel(s, spec);
    bins(p.x, p.y) += s.amplitude;
  }
  return bins;
}

Grid<double> psf_kernel(const PSFSpec& psf) {
  psf.validate();
  const int ha = psf.half_extent_axial_px;
  const int hl = psf.half_extent_lateral_px;
  Grid<double> k(2 * hl + 1, 2 * ha + 1);
  const double two_pi_f = 2.0 * std::numbers::pi * psf.center_freq_cyc_per_px;
  for (int dz = -ha; dz <= ha; ++dz) {
    const double axial = std::exp(-0.5 * dz * dz / (psf.sigma_axial_px * psf.sigma_axial_px)) *
                         std::cos(two_pi_f * dz);
    for (int dx = -hl; dx <= hl; ++dx) {
      const double lateral =
          std::exp(-0.5 * dx * dx / (psf.sigma_lateral_px * psf.sigma_lateral_px));
      k(dx + hl, dz + ha) = axial * lateral;
    }
  }
  return k;
}

Grid<double> render_rf(const ScattererField& field, const PhantomSpec& spec, const PSFSpec& psf) {
  spec.validate();
  const auto bins = bin_scatterers(field, spec);
  const auto kernel = psf_kernel(psf);
  const int w = spec.grid_width;
  const int h = spec.grid_height;
  const int ha = psf.half_extent_axial_px;
  const int hl = psf.half_extent_lateral_px;

  // Direct 2D convolution; the kernel is not assumed separable.
  Grid<double> rf(w, h, 0.0);
  for (int y = 0; y < h; ++y) {
    const int ky_lo = std::max(-ha, y - (h - 1));
    const int ky_hi = std::min(ha, y);
    for (int x = 0; x < w; ++x) {
      const int kx_lo = std::max(-hl, x - (w - 1));
      const int kx_hi = std::min(hl, x);
      double acc = 0.0;
      for (int dz = ky_lo; dz <= ky_hi; ++dz) {
        const double* src = &bins(0, y - dz);
        const double* krow = &kernel(0, dz + ha);
        for (int dx = kx_lo; dx <= kx_hi; ++dx) acc += src[x - dx] * krow[dx + hl];
      }
      rf(x, y) = acc;
    }
  }
  return rf;
}

Grid<double> envelope(const Grid<double>& rf) {
  const int w = rf.width();
  const int h = rf.height();
  Grid<double> env(w, h, 0.0);
  if (rf.empty()) return env;

  auto buf = detail::alloc_buffer(static_cast<std::size_t>(h));
  auto spec = detail::alloc_buffer(static_cast<std::size_t>(h));
  auto forward = detail::plan_1d(h, buf.get(), spec.get(), FFTW_FORWARD);
  auto backward = detail::plan_1d(h, spec.get(), buf.get(), FFTW_BACKWARD);
  auto* time = detail::as_complex(buf.get());
  auto* freq = detail::as_complex(spec.get());

  // Analytic signal: keep DC (and Nyquist on even lengths), double positive
  // frequencies, drop negative ones.
  const int half = h / 2;
  const bool even = h % 2 == 0;
  const double scale = 1.0 / h;
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) time[y] = {rf(x, y), 0.0};
    fftw_execute(forward.get());
    for (int k = 1; k < h; ++k) {
      if (k < half || (!even && k == half)) {
        freq[k] *= 2.0;
      } else if (!(even && k == half)) {
        freq[k] = 0.0;
      }
    }
    fftw_execute(backward.get());
    for (int y = 0; y < h; ++y) env(x, y) = std::abs(time[y]) * scale;
  }
  return env;
}

RealImage log_compress(const Grid<double>& env, double dynamic_range_db) {
  if (!(dynamic_range_db > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "dynamic range must be positive");
  }
  RealImage out(env.width(), env.height(), 0.0);
  const double peak = env.empty() ? 0.0 : *std::max_element(env.begin(), env.end());
  if (!(peak > 0.0)) return out;
  for (std::size_t i = 0; i < env.size(); ++i) {
    const double e = env.data()[i];
    if (!(e > 0.0)) continue;
    const double db = 20.0 * std::log10(e / peak);
    out.data()[i] = std::clamp(1.0 + db / dynamic_range_db, 0.0, 1.0);
  }
  return out;
}

Grid<double> render_envelope(const ScattererField& field, const PhantomSpec& spec,
                             const PSFSpec& psf) {
  return envelope(render_rf(field, spec, psf));
}

RealImage render_bmode(const ScattererField& field, const PhantomSpec& spec, const PSFSpec& psf,
                       double dynamic_range_db) {
  return log_compress(render_envelope(field, spec, psf), dynamic_range_db);
}

}  // namespace phaseswap
