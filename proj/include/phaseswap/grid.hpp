#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "phaseswap/error.hpp"

namespace phaseswap {

/// Row-major W x H grid. Element (x, y) lives at data[y * width + x];
/// x runs along the width (lateral / column), y along the height (row).
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;

  Grid(int width, int height, T fill = T{}) : width_(width), height_(height) {
    check_shape(width, height);
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  Grid(int width, int height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    check_shape(width, height);
    if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
      throw Error(ErrorCode::InvalidArgument,
                  "grid data holds " + std::to_string(data_.size()) + " values, expected " +
                      std::to_string(width) + "x" + std::to_string(height));
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const noexcept { return data_[index(x, y)]; }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  template <typename U>
  bool same_shape(const Grid<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  static void check_shape(int width, int height) {
    if (width < 0 || height < 0) {
      throw Error(ErrorCode::InvalidArgument, "negative grid dimension");
    }
  }

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// Real intensity image; also used for masks and simulated outputs.
class RealImage : public Grid<double> {
 public:
  using Grid<double>::Grid;
};

/// Frequency-domain values, always stored DC-centered: zero frequency sits
/// at bin (W/2, H/2).
class Spectrum : public Grid<std::complex<double>> {
 public:
  using Grid<std::complex<double>>::Grid;
};

struct PolarSpectrum {
  Grid<double> magnitude;
  Grid<double> phase;
};

/// Throws InvalidArgument unless the image is at least 2x2 with finite values.
void validate(const RealImage& img, const char* what = "image");

/// Throws OddDimension unless both sides are even.
void require_even(int width, int height, const char* what = "image");

/// Throws DimensionMismatch unless both grids share a shape.
template <typename A, typename B>
void require_same_shape(const Grid<A>& a, const Grid<B>& b, const char* what) {
  if (!a.same_shape(b)) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": " + std::to_string(a.width()) + "x" +
                    std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                    std::to_string(b.height()));
  }
}

}  // namespace phaseswap
