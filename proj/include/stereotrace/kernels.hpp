// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference variant and
// optional SIMD variants (AVX2 on x86-64, NEON on AArch64) selected at run
// time. All variants of a kernel are bit-identical; tests enforce this.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "stereotrace/ray.hpp"

namespace stereotrace::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);

/// Triangle vertices in structure-of-arrays layout, in canonical
/// (object, face) order.
struct TriangleArrays {
  std::vector<double> x0, y0, z0, x1, y1, z1, x2, y2, z2;

  std::size_t size() const { return x0.size(); }
  void push_back(const Vec3& a, const Vec3& b, const Vec3& c);
  Vec3 v0(std::size_t i) const { return {x0[i], y0[i], z0[i]}; }
  Vec3 v1(std::size_t i) const { return {x1[i], y1[i], z1[i]}; }
  Vec3 v2(std::size_t i) const { return {x2[i], y2[i], z2[i]}; }

  friend bool operator==(const TriangleArrays&, const TriangleArrays&) = default;
};

inline constexpr std::uint32_t kNoTriangle = std::numeric_limits<std::uint32_t>::max();

/// Running nearest-hit candidate. A triangle replaces the candidate when its
/// t is smaller, or equal with a smaller index.
struct NearestCandidate {
  double t = std::numeric_limits<double>::infinity();
  std::uint32_t index = kNoTriangle;

  bool found() const { return index != kNoTriangle; }
  void offer(double t_new, std::uint32_t index_new) {
    if (t_new < t || (t_new == t && index_new < index)) {
      t = t_new;
      index = index_new;
    }
  }
};

/// Determinant magnitude below which a ray counts as parallel to a triangle.
inline constexpr double kParallelEpsilon = 1e-12;

/// Tests triangles [begin, end) and offers every hit with t in (t_min, candidate.t].
using IntersectRangeFn = void (*)(const TriangleArrays& tris, std::size_t begin, std::size_t end, const Ray& ray,
                                  double t_min, NearestCandidate& candidate);

/// Linear intensities to 8-bit: clamp(round_half_away(c * 255), 0, 255).
using QuantizeFn = void (*)(std::span<const double> in, std::span<std::uint8_t> out);

/// Interleaved RGB: out = (left.r, right.g, right.b) per pixel.
using AnaglyphFn = void (*)(std::span<const std::uint8_t> left, std::span<const std::uint8_t> right,
                            std::span<std::uint8_t> out);

/// One RGB row of `in_pixels` pixels squeezed to in_pixels / 2 pixels by
/// averaging column pairs, (a + b + 1) >> 1 per channel.
using SqueezeRowFn = void (*)(std::span<const std::uint8_t> in, std::span<std::uint8_t> out);

struct KernelTable {
  Isa isa;
  IntersectRangeFn intersect_range;
  QuantizeFn quantize;
  AnaglyphFn anaglyph;
  SqueezeRowFn squeeze_row;
};

bool isa_supported(Isa isa);
std::vector<Isa> available_isas();

/// Throws std::invalid_argument if the ISA is not supported on this host.
const KernelTable& kernels(Isa isa);

/// Best supported ISA, unless STEREOTRACE_ISA=scalar|avx2|neon overrides it.
const KernelTable& active_kernels();

// Per-ISA tables; the SIMD ones return nullptr when not compiled in.
const KernelTable* scalar_table();
const KernelTable* avx2_table();
const KernelTable* neon_table();

// Scalar references, shared by the SIMD variants for loop tails.
void intersect_range_scalar(const TriangleArrays& tris, std::size_t begin, std::size_t end, const Ray& ray,
                            double t_min, NearestCandidate& candidate);
void quantize_scalar(std::span<const double> in, std::span<std::uint8_t> out);
void anaglyph_scalar(std::span<const std::uint8_t> left, std::span<const std::uint8_t> right,
                     std::span<std::uint8_t> out);
void squeeze_row_scalar(std::span<const std::uint8_t> in, std::span<std::uint8_t> out);

}  // namespace stereotrace::simd
