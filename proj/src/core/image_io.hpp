#pragma once

#include <cstdint>
#include <string>

#include "image.hpp"

namespace natle {

inline constexpr std::uint64_t kMaxImagePixels = std::uint64_t{1} << 28;

struct LoadedImage {
  RgbImage image;
  int bit_depth = 8;
  bool alpha_dropped = false;
};

/// Reads an 8- or 16-bit PNG or a JPEG. Samples are normalized by 255 or
/// 65535; grayscale inputs are replicated to three channels.
///
/// Throws Error with io_unreadable (cannot open), io_format (not PNG/JPEG or
/// undecodable) or io_dimensions (zero or more than kMaxImagePixels pixels).
LoadedImage load_image(const std::string& path);

/// Writes an 8-bit RGB PNG regardless of the path's extension. Values are
/// clamped to [0,1] and quantized with round(v * 255).
void save_image(const std::string& path, const RgbImage& img);

}  // namespace natle
