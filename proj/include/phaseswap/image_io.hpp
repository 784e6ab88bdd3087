#pragma once

#include <filesystem>

#include "phaseswap/grid.hpp"

namespace phaseswap {

/// Reads an 8-bit grayscale PNG or binary PGM (P5) as values in [0, 1].
/// Color PNGs are converted to gray. Throws UnreadableImage.
RealImage read_image(const std::filesystem::path& path);

/// Quantizes [0, 1] values to 8 bits (round to nearest, clamped) and writes
/// a grayscale PNG, or a P5 PGM when the extension is .pgm. Throws IoFailure.
void write_image(const std::filesystem::path& path, const RealImage& img);

/// 8-bit quantization used by write_image.
std::uint8_t quantize(double v) noexcept;

}  // namespace phaseswap
