// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0

#include "stereotrace/image.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "stereotrace/errors.hpp"

namespace stereotrace {

Image quantize(const Framebuffer& fb, const simd::KernelTable& kernels) {
  Image image(fb.width, fb.height);
  kernels.quantize(fb.values, image.pixels);
  return image;
}

std::string encode_ppm(const Image& image) {
  std::string out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(image.pixels.data()), image.pixels.size());
  return out;
}

Image decode_ppm(std::string_view bytes) {
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (bytes[pos] == ' ' || bytes[pos] == '\n' || bytes[pos] == '\r' || bytes[pos] == '\t') {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&] {
    skip_space();
    int value = 0;
    const auto [ptr, ec] = std::from_chars(bytes.data() + pos, bytes.data() + bytes.size(), value);
    if (ec != std::errc()) throw Error("malformed PPM header");
    pos = static_cast<std::size_t>(ptr - bytes.data());
    return value;
  };

  if (bytes.substr(0, 2) != "P6") throw Error("not a binary PPM (P6) file");
  pos = 2;
  const int width = read_int();
  const int height = read_int();
  const int maxval = read_int();
  if (width < 1 || height < 1 || maxval != 255) throw Error("unsupported PPM dimensions or depth");
  ++pos;  // single whitespace byte before the raster

  Image image(width, height);
  if (bytes.size() - std::min(pos, bytes.size()) != image.pixels.size()) throw Error("PPM raster size mismatch");
  std::copy(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.end(), image.pixels.begin());
  return image;
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw WriteError(path.string());
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  file.close();
  if (!file) throw WriteError(path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw FileNotFound(path.string());
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

}  // namespace stereotrace
