#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "phaseswap/speckle.hpp"
#include "support.hpp"

using namespace phaseswap;

namespace {

PhantomSpec phantom(std::int64_t n, int size = 256) {
  PhantomSpec s;
  s.num_scatterers = n;
  s.grid_width = size;
  s.grid_height = size;
  return s;
}

RealImage disc_mask(int size, double radius) {
  RealImage m(size, size, 0.0);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double dx = x + 0.5 - size / 2.0, dy = y + 0.5 - size / 2.0;
      if (dx * dx + dy * dy <= radius * radius) m(x, y) = 1.0;
    }
  }
  return m;
}

}  // namespace

TEST_CASE("phantom and PSF validation") {
  CHECK_NOTHROW(PhantomSpec{}.validate());
  CHECK_THROWS_AS(phantom(-1).validate(), Error);
  auto odd = phantom(10);
  odd.grid_width = 255;
  CHECK_THROWS_AS(odd.validate(), Error);
  auto flat = phantom(10);
  flat.depth_mm = 0.0;
  CHECK_THROWS_AS(flat.validate(), Error);

  CHECK_NOTHROW(PSFSpec{}.validate());
  PSFSpec short_kernel;
  short_kernel.half_extent_axial_px = 8;  // < 3 * 3
  CHECK_THROWS_AS(short_kernel.validate(), Error);
  const auto auto_extent = PSFSpec::with_sigmas(0.2, 2.5, 4.1);
  CHECK(auto_extent.half_extent_axial_px == 8);
  CHECK(auto_extent.half_extent_lateral_px == 13);
  CHECK_NOTHROW(auto_extent.validate());
}

TEST_CASE("sample_scatterers basics") {
  CHECK(sample_scatterers(phantom(0), 1).scatterers.empty());
  CHECK(sample_scatterers(phantom(500), 9) == sample_scatterers(phantom(500), 9));
  CHECK_FALSE(sample_scatterers(phantom(500), 9) == sample_scatterers(phantom(500), 10));
  const auto spec = phantom(2000);
  for (const auto& s : sample_scatterers(spec, 4).scatterers) {
    CHECK(s.x_mm >= 0.0);
    CHECK(s.x_mm < spec.width_mm);
    CHECK(s.z_mm >= 0.0);
    CHECK(s.z_mm < spec.depth_mm);
    CHECK(std::isfinite(s.amplitude));
  }
}

TEST_CASE("scatterers are uniform over the quadrants") {
  // Binomial(100000, 1/4): sd = sqrt(100000 * 0.25 * 0.75) = 136.9, so 600 is ~4.4 sd.
  const double n = 100000.0;
  const double sd = std::sqrt(n * 0.25 * 0.75);
  REQUIRE(4.0 * sd < 600.0);
  const auto spec = phantom(100'000);
  const auto field = sample_scatterers(spec, 2024);
  int q[4] = {0, 0, 0, 0};
  double sum = 0.0, sum2 = 0.0;
  for (const auto& s : field.scatterers) {
    const int i = (s.x_mm < spec.width_mm / 2 ? 0 : 1) + (s.z_mm < spec.depth_mm / 2 ? 0 : 2);
    ++q[i];
    sum += s.amplitude;
    sum2 += s.amplitude * s.amplitude;
  }
  for (int c : q) CHECK(std::abs(c - 25000) <= 600);
  // Standard normal amplitudes: mean 0 (sd of the mean 0.0032), variance 1.
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(std::abs(sum2 / n - 1.0) < 0.02);
}

TEST_CASE("apply_anechoic_mask") {
  const auto spec = phantom(3000, 32);
  const auto field = sample_scatterers(spec, 5);
  CHECK(apply_anechoic_mask(field, RealImage(32, 32, 0.0), spec) == field);
  for (const auto& s : apply_anechoic_mask(field, RealImage(32, 32, 1.0), spec).scatterers) {
    CHECK(s.amplitude == 0.0);
  }

  // Left half-plane: brute-force membership per scatterer from its position.
  RealImage half(32, 32, 0.0);
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 16; ++x) half(x, y) = 1.0;
  }
  const auto masked = apply_anechoic_mask(field, half, spec);
  std::size_t zeroed = 0;
  for (std::size_t i = 0; i < field.scatterers.size(); ++i) {
    const auto& before = field.scatterers[i];
    const auto& after = masked.scatterers[i];
    CHECK(after.x_mm == before.x_mm);
    CHECK(after.z_mm == before.z_mm);
    const bool inside = before.x_mm < spec.width_mm / 2.0;
    CHECK(after.amplitude == (inside ? 0.0 : before.amplitude));
    zeroed += inside;
  }
  CHECK(zeroed > 1000);

  try {
    apply_anechoic_mask(field, RealImage(16, 32), spec);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("empty field renders black") {
  const auto img = render_bmode(ScattererField{}, phantom(0, 64), PSFSpec{});
  for (double v : img) CHECK(v == 0.0);
}

TEST_CASE("single scatterer gives a centered PSF-shaped envelope") {
  const auto spec = phantom(1, 64);
  ScattererField field;
  // Center of pixel (32, 32).
  field.scatterers.push_back(
      {spec.width_mm * 32.5 / 64.0, spec.depth_mm * 32.5 / 64.0, 1.0});
  const auto env = render_envelope(field, spec, PSFSpec{});
  double peak = 0.0;
  int px = -1, py = -1;
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) {
      if (env(x, y) > peak) {
        peak = env(x, y);
        px = x;
        py = y;
      }
    }
  }
  CHECK(px == 32);
  CHECK(py == 32);
  CHECK(peak == doctest::Approx(1.0).epsilon(0.02));
  // Lateral profile is the Gaussian window; axial profile its analytic envelope.
  for (int d = 1; d <= 12; ++d) {
    CHECK(env(32 + d, 32) < env(32 + d - 1, 32));
    CHECK(env(32 + d, 32) == doctest::Approx(peak * std::exp(-0.5 * d * d / 36.0)).epsilon(1e-9));
  }
  for (int d = 1; d <= 6; ++d) {
    CHECK(env(32, 32 + d) < env(32, 32 + d - 1));
    CHECK(env(32, 32 - d) < env(32, 32 - d + 1));
    CHECK(env(32, 32 + d) == doctest::Approx(std::exp(-0.5 * d * d / 9.0)).epsilon(0.03));
  }
}

TEST_CASE("envelope of an in-band cosine is its amplitude") {
  Grid<double> rf(2, 64);
  for (int y = 0; y < 64; ++y) {
    rf(0, y) = 3.0 * std::cos(2.0 * std::numbers::pi * 8.0 * y / 64.0 + 0.3);
    rf(1, y) = 0.0;
  }
  const auto env = envelope(rf);
  for (int y = 0; y < 64; ++y) {
    CHECK(env(0, y) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(env(1, y) == 0.0);
  }
}

TEST_CASE("RF rendering is linear in the amplitudes") {
  const auto spec = phantom(4000, 64);
  const auto field = sample_scatterers(spec, 77);
  auto doubled = field;
  for (auto& s : doubled.scatterers) s.amplitude *= 2.0;
  const auto rf = render_rf(field, spec, PSFSpec{});
  const auto rf2 = render_rf(doubled, spec, PSFSpec{});
  // Power-of-two scaling commutes with every rounding step.
  for (std::size_t i = 0; i < rf.size(); ++i) REQUIRE(rf2.data()[i] == 2.0 * rf.data()[i]);

  auto scaled = field;
  for (auto& s : scaled.scatterers) s.amplitude *= -0.37;
  const auto rf3 = render_rf(scaled, spec, PSFSpec{});
  double peak = 0.0;
  for (double v : rf) peak = std::max(peak, std::abs(v));
  for (std::size_t i = 0; i < rf.size(); ++i) {
    REQUIRE(std::abs(rf3.data()[i] + 0.37 * rf.data()[i]) <= 1e-12 * peak);
  }
}

TEST_CASE("B-mode output is deterministic and within [0, 1]") {
  const auto spec = phantom(20000, 64);
  const auto field = sample_scatterers(spec, 3);
  const auto a = render_bmode(field, spec, PSFSpec{});
  CHECK(a == render_bmode(sample_scatterers(spec, 3), spec, PSFSpec{}));
  for (double v : a) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  for (double v : render_envelope(field, spec, PSFSpec{})) CHECK(v >= 0.0);
  CHECK(*std::max_element(a.begin(), a.end()) == 1.0);
}

TEST_CASE("log compression maps the dynamic range onto [0, 1]") {
  Grid<double> env(2, 2, std::vector<double>{1.0, 0.1, 0.001, 0.0});
  const auto out = log_compress(env, 60.0);
  CHECK(out(0, 0) == 1.0);
  CHECK(out(1, 0) == doctest::Approx(1.0 - 20.0 / 60.0));
  CHECK(out(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(out(1, 1) == 0.0);
  CHECK_THROWS_AS(log_compress(env, 0.0), Error);
}

TEST_CASE("fully developed speckle has Rayleigh statistics") {
  // Rayleigh envelope: mean / sd = sqrt(pi / (4 - pi)) = 1.913.
  const double rayleigh_snr = std::sqrt(std::numbers::pi / (4.0 - std::numbers::pi));
  CHECK(rayleigh_snr == doctest::Approx(1.91).epsilon(0.002));

  const auto spec = phantom(100'000);
  const PSFSpec psf;
  const auto env = render_envelope(sample_scatterers(spec, 11), spec, psf);
  // Skip the border, where zero padding and the circular Hilbert transform
  // break stationarity.
  const int mx = psf.half_extent_lateral_px, my = 2 * psf.half_extent_axial_px;
  double sum = 0.0, sum2 = 0.0;
  std::size_t n = 0;
  for (int y = my; y < 256 - my; ++y) {
    for (int x = mx; x < 256 - mx; ++x) {
      sum += env(x, y);
      sum2 += env(x, y) * env(x, y);
      ++n;
    }
  }
  REQUIRE(n >= 10'000);
  const double mean = sum / n;
  const double sd = std::sqrt(sum2 / n - mean * mean);
  MESSAGE("speckle SNR " << mean / sd << " over " << n << " pixels");
  CHECK(std::abs(mean / sd - 1.91) <= 0.15);
}

TEST_CASE("anechoic disc is at least 20 dB darker than the background") {
  const auto spec = phantom(100'000);
  const PSFSpec psf;
  const double radius = 60.0;
  const auto lesion = disc_mask(256, radius);
  const auto field = apply_anechoic_mask(sample_scatterers(spec, 21), lesion, spec);
  const double range_db = 60.0;
  const auto img = render_bmode(field, spec, psf, range_db);

  // Inside: the disc shrunk by the PSF reach. Outside: beyond it, away from the border.
  const double reach = psf.half_extent_lateral_px;
  double in_sum = 0.0, out_sum = 0.0;
  std::size_t in_n = 0, out_n = 0;
  for (int y = 20; y < 236; ++y) {
    for (int x = 20; x < 236; ++x) {
      const double r = std::hypot(x + 0.5 - 128.0, y + 0.5 - 128.0);
      if (r < radius - reach) {
        in_sum += img(x, y);
        ++in_n;
      } else if (r > radius + reach) {
        out_sum += img(x, y);
        ++out_n;
      }
    }
  }
  const double contrast_db = (out_sum / out_n - in_sum / in_n) * range_db;
  MESSAGE("disc contrast " << contrast_db << " dB");
  CHECK(contrast_db >= 20.0);
}
