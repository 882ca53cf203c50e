#ifndef TEXWARP_IMAGE_HPP
#define TEXWARP_IMAGE_HPP

#include <cstdint>
#include <vector>

#include "texwarp/errors.hpp"

namespace texwarp {

/// 8-bit raster, row-major, top row first. channels is 1 (gray) or 3 (RGB).
struct Image {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> data;

  Image() = default;
  Image(int w, int h, int c, std::uint8_t fill = 255)
      : width(w), height(h), channels(c),
        data(static_cast<std::size_t>(w) * h * c, fill) {
    if (w <= 0 || h <= 0 || (c != 1 && c != 3)) {
      throw Error(Errc::InvalidArgument, "bad image dimensions");
    }
  }

  std::uint8_t& at(int x, int y, int c) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t at(int x, int y, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
};

}  // namespace texwarp

#endif
