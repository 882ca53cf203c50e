// Minimal binary PPM (P6) / PGM (P5) reader and writer, 8-bit only.
#ifndef TEXWARP_TOOLS_PNM_HPP
#define TEXWARP_TOOLS_PNM_HPP

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pnm {

struct Raster {
  int width = 0;
  int height = 0;
  int channels = 1;  // 1 -> P5, 3 -> P6
  std::vector<std::uint8_t> data;
};

inline void write(const std::string& path, const Raster& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << (img.channels == 3 ? "P6" : "P5") << "\n"
      << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
  if (!out) throw std::runtime_error("short write to " + path);
}

inline int next_token(std::istream& in) {
  // Skips whitespace and '#' comments, returns a nonnegative integer.
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
  int value = 0;
  if (!(in >> value)) throw std::runtime_error("malformed PNM header");
  return value;
}

inline Raster read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6')) {
    throw std::runtime_error(path + " is not a binary PGM/PPM file");
  }
  Raster img;
  img.channels = (magic[1] == '6') ? 3 : 1;
  img.width = next_token(in);
  img.height = next_token(in);
  const int maxval = next_token(in);
  if (img.width <= 0 || img.height <= 0 || maxval != 255) {
    throw std::runtime_error(path + ": unsupported PNM dimensions or depth");
  }
  in.get();  // single whitespace after maxval
  img.data.resize(static_cast<std::size_t>(img.width) * img.height *
                  img.channels);
  in.read(reinterpret_cast<char*>(img.data.data()),
          static_cast<std::streamsize>(img.data.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.data.size())) {
    throw std::runtime_error(path + ": truncated pixel data");
  }
  return img;
}

}  // namespace pnm

#endif
