#include "phaseswap/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

namespace phaseswap {
namespace {

bool has_extension(const std::filesystem::path& path, std::string_view ext) {
  auto e = path.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
  return e == ext;
}

[[noreturn]] void unreadable(const std::filesystem::path& path, const std::string& why) {
  throw Error(ErrorCode::UnreadableImage, path.string() + ": " + why);
}

RealImage read_png(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    unreadable(path, image.message);
  }
  image.format = PNG_FORMAT_GRAY;
  std::vector<png_byte> pixels(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr)) {
    png_image_free(&image);
    unreadable(path, image.message);
  }
  const int w = static_cast<int>(image.width);
  const int h = static_cast<int>(image.height);
  RealImage img(w, h);
  for (std::size_t i = 0; i < img.size(); ++i) img.data()[i] = pixels[i] / 255.0;
  return img;
}

// Skips whitespace and '#' comments, then reads one decimal header field.
bool pgm_field(const std::vector<unsigned char>& bytes, std::size_t& pos, long& value) {
  while (pos < bytes.size()) {
    if (bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (std::isspace(bytes[pos])) {
      ++pos;
    } else {
      break;
    }
  }
  if (pos >= bytes.size() || !std::isdigit(bytes[pos])) return false;
  value = 0;
  while (pos < bytes.size() && std::isdigit(bytes[pos])) {
    value = value * 10 + (bytes[pos] - '0');
    if (value > 1'000'000) return false;
    ++pos;
  }
  return true;
}

RealImage read_pgm(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
  std::size_t pos = 2;
  long w = 0, h = 0, maxval = 0;
  if (!pgm_field(bytes, pos, w) || !pgm_field(bytes, pos, h) || !pgm_field(bytes, pos, maxval)) {
    unreadable(path, "malformed PGM header");
  }
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535) unreadable(path, "bad PGM header values");
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) unreadable(path, "malformed PGM header");
  ++pos;
  const std::size_t bpp = maxval > 255 ? 2 : 1;
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (bytes.size() - pos < n * bpp) unreadable(path, "truncated PGM data");

  RealImage img(static_cast<int>(w), static_cast<int>(h));
  const auto max = static_cast<double>(maxval);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t at = pos + i * bpp;
    const unsigned v = bpp == 2 ? (bytes[at] << 8) | bytes[at + 1] : bytes[at];
    img.data()[i] = std::min(1.0, v / max);
  }
  return img;
}

}  // namespace

std::uint8_t quantize(double v) noexcept {
  if (!(v > 0.0)) return 0;
  if (v >= 1.0) return 255;
  return static_cast<std::uint8_t>(std::lround(v * 255.0));
}

RealImage read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) unreadable(path, "cannot open");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  static constexpr unsigned char kPngMagic[] = {0x89, 'P', 'N', 'G'};
  if (bytes.size() >= 8 && std::equal(std::begin(kPngMagic), std::end(kPngMagic), bytes.begin())) {
    return read_png(path, bytes);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return read_pgm(path, bytes);
  unreadable(path, "not a PNG or binary PGM file");
}

void write_image(const std::filesystem::path& path, const RealImage& img) {
  std::vector<std::uint8_t> pixels(img.size());
  std::transform(img.begin(), img.end(), pixels.begin(), quantize);

  if (has_extension(path, ".pgm")) {
    std::ofstream out(path, std::ios::binary);
    out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(pixels.data()),
              static_cast<std::streamsize>(pixels.size()));
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    return;
  }

  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, pixels.data(), 0, nullptr)) {
    throw Error(ErrorCode::IoFailure, "cannot write " + path.string() + ": " + image.message);
  }
}

}  // namespace phaseswap
