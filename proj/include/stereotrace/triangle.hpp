// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <optional>

#include "stereotrace/kernels.hpp"
#include "stereotrace/ray.hpp"

namespace stereotrace {

struct TriangleHit {
  double t;
  double u;
  double v;
};

/// Barycentric ray/triangle solve (Moller-Trumbore). Edges count as inside.
/// Returns the hit only if t > t_min. The operation order here is the
/// reference for the SIMD batch kernels.
inline std::optional<TriangleHit> intersect_triangle(const Ray& ray, const Vec3& v0, const Vec3& v1, const Vec3& v2,
                                                     double t_min) {
  const Vec3 e1 = v1 - v0;
  const Vec3 e2 = v2 - v0;
  const Vec3 p = cross(ray.direction, e2);
  const double det = dot(e1, p);
  if (std::abs(det) < simd::kParallelEpsilon) return std::nullopt;
  const double inv = 1.0 / det;
  const Vec3 s = ray.origin - v0;
  const double u = dot(s, p) * inv;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  const Vec3 q = cross(s, e1);
  const double v = dot(ray.direction, q) * inv;
  if (v < 0.0 || u + v > 1.0) return std::nullopt;
  const double t = dot(e2, q) * inv;
  if (!(t > t_min)) return std::nullopt;
  return TriangleHit{t, u, v};
}

}  // namespace stereotrace
