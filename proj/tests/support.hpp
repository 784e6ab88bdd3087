#pragma once

// Test-only helpers. Nothing here calls into the library's transform code,
// so the oracles stay independent of what they check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "phaseswap/grid.hpp"

namespace testing {

inline phaseswap::RealImage random_image(int w, int h, std::uint64_t seed, double lo = 0.0,
                                         double hi = 1.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  phaseswap::RealImage img(w, h);
  for (auto& v : img) v = dist(gen);
  return img;
}

/// Random filled ellipse with lesion = 1.
inline phaseswap::RealImage random_blob(int w, int h, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double cx = w * (0.3 + 0.4 * u(gen));
  const double cy = h * (0.3 + 0.4 * u(gen));
  const double rx = w * (0.08 + 0.15 * u(gen));
  const double ry = h * (0.08 + 0.15 * u(gen));
  phaseswap::RealImage img(w, h, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double dx = (x - cx) / rx;
      const double dy = (y - cy) / ry;
      if (dx * dx + dy * dy <= 1.0) img(x, y) = 1.0;
    }
  }
  return img;
}

/// Direct evaluation of the 2D DFT sum, returned DC-centered: bin (m, n)
/// holds the frequency (m - W/2, n - H/2). O((WH)^2); small grids only.
inline std::vector<std::complex<double>> naive_dft_centered(const phaseswap::RealImage& img) {
  const int w = img.width();
  const int h = img.height();
  std::vector<std::complex<double>> out(static_cast<std::size_t>(w) * h);
  for (int n = 0; n < h; ++n) {
    for (int m = 0; m < w; ++m) {
      const int fm = m - w / 2;
      const int fn = n - h / 2;
      std::complex<double> acc{0.0, 0.0};
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const double angle = -2.0 * std::numbers::pi *
                               (static_cast<double>(fn) * y / h + static_cast<double>(fm) * x / w);
          acc += img(x, y) * std::complex<double>(std::cos(angle), std::sin(angle));
        }
      }
      out[static_cast<std::size_t>(n) * w + m] = acc;
    }
  }
  return out;
}

/// Exhaustive evaluation of the low-frequency ellipse membership test.
inline std::size_t brute_force_ellipse_count(int w, int h, double alpha) {
  if (alpha == 0.0) return 0;
  std::size_t count = 0;
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) {
      const double ax = alpha * w / 2.0;
      const double ay = alpha * h / 2.0;
      const double dx = x - w / 2.0;
      const double dy = y - h / 2.0;
      if (dx * dx / (ax * ax) + dy * dy / (ay * ay) <= 1.0) ++count;
    }
  }
  return count;
}

inline double max_abs_diff(const phaseswap::RealImage& a, const phaseswap::RealImage& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  }
  return m;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            (name + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
