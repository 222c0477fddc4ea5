// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>

#include "stereotrace/math.hpp"

namespace stereotrace {

/// Half-line; direction is unit length.
struct Ray {
  Vec3 origin;
  Vec3 direction;

  static Ray through(const Vec3& origin, const Vec3& direction) { return {origin, normalize(direction)}; }
  Vec3 at(double t) const { return origin + direction * t; }
};

/// Nearest surface interaction. `normal` is the geometric face normal
/// flipped toward the side the ray came from.
struct Hit {
  double t = 0.0;
  Vec3 point;
  Vec3 normal;
  std::size_t object_index = 0;
  std::size_t face_index = 0;
};

struct TraceSettings {
  int max_depth = 3;
  double t_min = 1e-4;
  double shadow_bias = 1e-4;
};

}  // namespace stereotrace
