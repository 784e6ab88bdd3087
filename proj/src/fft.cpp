#include "phaseswap/fft.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "half_spectrum.hpp"

namespace phaseswap {

namespace detail {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan cached_plan_2d(PlanKind kind, int width, int height) {
  std::lock_guard lock(planner_mutex());
  static std::map<std::tuple<PlanKind, int, int>, Plan> cache;
  auto& slot = cache[{kind, width, height}];
  if (!slot) {
    const std::size_t n = static_cast<std::size_t>(width) * height;
    auto out = alloc_buffer(n);
    fftw_plan p = nullptr;
    if (kind == PlanKind::r2c || kind == PlanKind::c2r) {
      RealBuffer real = alloc_real(n);
      p = kind == PlanKind::r2c
              ? fftw_plan_dft_r2c_2d(height, width, real.get(), out.get(), FFTW_ESTIMATE)
              : fftw_plan_dft_c2r_2d(height, width, out.get(), real.get(), FFTW_ESTIMATE);
    } else {
      auto in = alloc_buffer(n);
      p = fftw_plan_dft_2d(height, width, in.get(), out.get(),
                           kind == PlanKind::c2c_forward ? FFTW_FORWARD : FFTW_BACKWARD,
                           FFTW_ESTIMATE);
    }
    if (p == nullptr) throw std::runtime_error("FFTW failed to create a plan");
    // The deleter takes the planner lock itself.
    slot = Plan(p);
  }
  return slot.get();
}

namespace {

// Multiplying samples by (-1)^(x+y) moves the DC bin to (W/2, H/2) on even
// grids, so the transforms read and write the centered layout directly.
inline double checker(int x, int y) { return ((x + y) & 1) ? -1.0 : 1.0; }

}  // namespace

HalfSpectrum forward_half(const RealImage& img) {
  validate(img);
  const int w = img.width();
  const int h = img.height();
  require_even(w, h);

  HalfSpectrum half{w, h, alloc_buffer(static_cast<std::size_t>(w / 2 + 1) * h)};
  RealBuffer in = alloc_real(img.size());
  for (int y = 0; y < h; ++y) {
    const double* src = img.data() + static_cast<std::size_t>(y) * w;
    double* dst = in.get() + static_cast<std::size_t>(y) * w;
    const double s = checker(0, y);
    for (int x = 0; x < w; x += 2) {
      dst[x] = s * src[x];
      dst[x + 1] = -s * src[x + 1];
    }
  }
  fftw_execute_dft_r2c(cached_plan_2d(PlanKind::r2c, w, h), in.get(), half.data.get());
  return half;
}

InverseResult inverse_half(HalfSpectrum&& half) {
  const int w = half.width;
  const int h = half.height;
  const double scale = 1.0 / (static_cast<double>(w) * h);

  // Columns 0 and W/2 are their own mirrors, so any conjugate mismatch
  // inside them is the whole anti-symmetric part. Its inverse is separable:
  // a0(y) + (-1)^x a1(y), from two 1D transforms along y.
  auto col0 = alloc_buffer(h);
  auto col1 = alloc_buffer(h);
  auto* a0 = as_complex(col0.get());
  auto* a1 = as_complex(col1.get());
  for (int y = 0; y < h; ++y) {
    const int m = mirror_index(y, h);
    a0[y] = 0.5 * (half.row(y)[0] - std::conj(half.row(m)[0]));
    a1[y] = 0.5 * (half.row(y)[w / 2] - std::conj(half.row(m)[w / 2]));
  }
  fftw_plan col_plan = cached_plan_2d(PlanKind::c2c_backward, h, 1);
  auto out0 = alloc_buffer(h);
  auto out1 = alloc_buffer(h);
  fftw_execute_dft(col_plan, col0.get(), out0.get());
  fftw_execute_dft(col_plan, col1.get(), out1.get());
  const auto* b0 = as_complex(out0.get());
  const auto* b1 = as_complex(out1.get());
  double residual = 0.0;
  for (int y = 0; y < h; ++y) {
    residual = std::max({residual, std::abs(b0[y] + b1[y]), std::abs(b0[y] - b1[y])});
  }

  RealBuffer out = alloc_real(static_cast<std::size_t>(w) * h);
  fftw_execute_dft_c2r(cached_plan_2d(PlanKind::c2r, w, h), half.data.get(), out.get());
  half.data.reset();

  InverseResult result{RealImage(w, h), residual * scale, 0.0};
  for (int y = 0; y < h; ++y) {
    const double* src = out.get() + static_cast<std::size_t>(y) * w;
    double* dst = result.image.data() + static_cast<std::size_t>(y) * w;
    const double s = checker(0, y) * scale;
    for (int x = 0; x < w; x += 2) {
      dst[x] = s * src[x];
      dst[x + 1] = -s * src[x + 1];
    }
  }
  const auto [lo, hi] = std::minmax_element(result.image.begin(), result.image.end());
  result.max_real_magnitude = std::max(std::abs(*lo), std::abs(*hi));
  return result;
}

}  // namespace detail

using detail::alloc_buffer;
using detail::as_complex;
using detail::checker;
using detail::PlanKind;

Spectrum forward_transform(const RealImage& img) {
  const auto half = detail::forward_half(img);
  const int w = half.width;
  const int h = half.height;
  const int stride = half.stride();

  Spectrum spec(w, h);
  for (int y = 0; y < h; ++y) {
    auto* row = spec.data() + static_cast<std::size_t>(y) * w;
    const auto* src = half.row(y);
    const auto* mirror = half.row(mirror_index(y, h));
    std::copy(src, src + stride, row);
    for (int x = stride; x < w; ++x) row[x] = std::conj(mirror[w - x]);
  }
  return spec;
}

InverseResult inverse_transform_with_residual(const Spectrum& spec) {
  const int w = spec.width();
  const int h = spec.height();
  if (w < 2 || h < 2) {
    throw Error(ErrorCode::InvalidArgument, "spectrum must be at least 2x2");
  }
  require_even(w, h, "spectrum");

  const std::size_t n = spec.size();
  auto in = alloc_buffer(n);
  auto out = alloc_buffer(n);
  std::copy(spec.begin(), spec.end(), as_complex(in.get()));
  fftw_execute_dft(detail::cached_plan_2d(PlanKind::c2c_backward, w, h), in.get(), out.get());

  const double scale = 1.0 / static_cast<double>(n);
  const auto* raw = as_complex(out.get());
  InverseResult result{RealImage(w, h), 0.0, 0.0};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const double s = checker(x, y) * scale;
      const double re = raw[i].real() * s;
      const double im = raw[i].imag() * s;
      result.image.data()[i] = re;
      result.max_imag_residual = std::max(result.max_imag_residual, std::abs(im));
      result.max_real_magnitude = std::max(result.max_real_magnitude, std::abs(re));
    }
  }
  return result;
}

RealImage inverse_transform(const Spectrum& spec) {
  auto result = inverse_transform_with_residual(spec);
  if (result.max_imag_residual > kNonRealTolerance * result.max_real_magnitude) {
    throw Error(ErrorCode::NonRealResult,
                "imaginary residual " + std::to_string(result.max_imag_residual) +
                    " exceeds tolerance for max real magnitude " +
                    std::to_string(result.max_real_magnitude));
  }
  return std::move(result.image);
}

PolarSpectrum to_polar(const Spectrum& spec) {
  PolarSpectrum polar{Grid<double>(spec.width(), spec.height()),
                      Grid<double>(spec.width(), spec.height())};
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const auto v = spec.data()[i];
    polar.magnitude.data()[i] = std::abs(v);
    if (v.real() == 0.0 && v.imag() == 0.0) {
      polar.phase.data()[i] = 0.0;
      continue;
    }
    double phase = std::arg(v);
    // atan2 yields -pi for a negative real with imag -0.0.
    if (phase <= -std::numbers::pi) phase = std::numbers::pi;
    polar.phase.data()[i] = phase;
  }
  return polar;
}

Spectrum from_polar(const PolarSpectrum& polar) {
  require_same_shape(polar.magnitude, polar.phase, "magnitude vs phase");
  Spectrum spec(polar.magnitude.width(), polar.magnitude.height());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double mag = polar.magnitude.data()[i];
    if (mag < 0.0) {
      throw Error(ErrorCode::NegativeMagnitude,
                  "magnitude " + std::to_string(mag) + " at flat index " + std::to_string(i));
    }
    spec.data()[i] = std::polar(mag, polar.phase.data()[i]);
  }
  return spec;
}

}  // namespace phaseswap
