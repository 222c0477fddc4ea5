// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "stereotrace/kernels.hpp"
#include "stereotrace/math.hpp"

namespace stereotrace {

/// Row-major 8-bit RGB raster.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // width * height * 3

  Image() = default;
  Image(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, 0) {}

  std::size_t offset(int x, int y) const { return (static_cast<std::size_t>(y) * width + x) * 3; }
  std::span<std::uint8_t> row(int y) { return {pixels.data() + offset(0, y), static_cast<std::size_t>(width) * 3}; }
  std::span<const std::uint8_t> row(int y) const {
    return {pixels.data() + offset(0, y), static_cast<std::size_t>(width) * 3};
  }

  friend bool operator==(const Image&, const Image&) = default;
};

/// Row-major linear RGB raster in double precision, as produced by the tracer.
struct Framebuffer {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // width * height * 3

  Framebuffer() = default;
  Framebuffer(int w, int h) : width(w), height(h), values(static_cast<std::size_t>(w) * h * 3, 0.0) {}

  std::span<double> row(int y) {
    return {values.data() + static_cast<std::size_t>(y) * width * 3, static_cast<std::size_t>(width) * 3};
  }
  Color at(int x, int y) const {
    const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
    return {values[i], values[i + 1], values[i + 2]};
  }
};

/// clamp(round(c * 255), 0, 255) per channel, rounding half away from zero.
Image quantize(const Framebuffer& fb, const simd::KernelTable& kernels = simd::active_kernels());

/// Binary PPM: "P6\n<w> <h>\n255\n" followed by the raw RGB bytes.
std::string encode_ppm(const Image& image);
Image decode_ppm(std::string_view bytes);

void write_file(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace stereotrace
