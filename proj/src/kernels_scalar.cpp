// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cassert>
#include <cmath>

#include "stereotrace/kernels.hpp"
#include "stereotrace/triangle.hpp"

namespace stereotrace::simd {

void TriangleArrays::push_back(const Vec3& a, const Vec3& b, const Vec3& c) {
  x0.push_back(a.x);
  y0.push_back(a.y);
  z0.push_back(a.z);
  x1.push_back(b.x);
  y1.push_back(b.y);
  z1.push_back(b.z);
  x2.push_back(c.x);
  y2.push_back(c.y);
  z2.push_back(c.z);
}

void intersect_range_scalar(const TriangleArrays& tris, std::size_t begin, std::size_t end, const Ray& ray,
                            double t_min, NearestCandidate& candidate) {
  for (std::size_t i = begin; i < end; ++i) {
    const auto hit = intersect_triangle(ray, tris.v0(i), tris.v1(i), tris.v2(i), t_min);
    if (hit && hit->t <= candidate.t) candidate.offer(hit->t, static_cast<std::uint32_t>(i));
  }
}

void quantize_scalar(std::span<const double> in, std::span<std::uint8_t> out) {
  assert(out.size() >= in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    const double q = std::clamp(std::round(in[i] * 255.0), 0.0, 255.0);
    out[i] = static_cast<std::uint8_t>(q);
  }
}

void anaglyph_scalar(std::span<const std::uint8_t> left, std::span<const std::uint8_t> right,
                     std::span<std::uint8_t> out) {
  assert(left.size() == right.size() && out.size() >= left.size() && left.size() % 3 == 0);
  for (std::size_t i = 0; i < left.size(); i += 3) {
    out[i] = left[i];
    out[i + 1] = right[i + 1];
    out[i + 2] = right[i + 2];
  }
}

void squeeze_row_scalar(std::span<const std::uint8_t> in, std::span<std::uint8_t> out) {
  const std::size_t out_pixels = in.size() / 6;
  assert(out.size() >= out_pixels * 3);
  for (std::size_t j = 0; j < out_pixels; ++j) {
    for (std::size_t c = 0; c < 3; ++c) {
      const unsigned a = in[6 * j + c];
      const unsigned b = in[6 * j + 3 + c];
      out[3 * j + c] = static_cast<std::uint8_t>((a + b + 1) >> 1);
    }
  }
}

const KernelTable* scalar_table() {
  static const KernelTable table{Isa::Scalar, intersect_range_scalar, quantize_scalar, anaglyph_scalar,
                                 squeeze_row_scalar};
  return &table;
}

}  // namespace stereotrace::simd
