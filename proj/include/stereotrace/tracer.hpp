// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>

#include "stereotrace/accel.hpp"
#include "stereotrace/ray.hpp"
#include "stereotrace/scene.hpp"
#include "stereotrace/triangle.hpp"

namespace stereotrace {

/// Pinhole projection of a camera onto a width x height raster. Pixel (0,0)
/// is top-left; rays pass through pixel centers of an image plane at unit
/// distance along the view direction.
class PinholeProjection {
 public:
  PinholeProjection(const Camera& camera, int width, int height);

  Ray ray(int px, int py) const;
  int width() const { return width_; }
  int height() const { return height_; }

 private:
  Vec3 origin_;
  Vec3 forward_;
  Vec3 right_;
  Vec3 up_;
  double half_width_;
  double half_height_;
  int width_;
  int height_;
};

/// Throws std::out_of_range unless 0 <= px < width and 0 <= py < height.
Ray generate_primary_ray(const Camera& camera, int px, int py, int width, int height);

/// d - 2 (d.n) n
inline Vec3 reflect(const Vec3& direction, const Vec3& normal) {
  return direction - normal * (2.0 * dot(direction, normal));
}

struct TraceCounters {
  std::uint64_t primary_rays = 0;
  std::uint64_t shadow_rays = 0;
  std::uint64_t reflection_rays = 0;
  QueryStats primary;    // queries issued for primary rays
  QueryStats secondary;  // shadow and reflection queries

  std::uint64_t triangle_tests() const { return primary.triangle_tests + secondary.triangle_tests; }

  TraceCounters& operator+=(const TraceCounters& o) {
    primary_rays += o.primary_rays;
    shadow_rays += o.shadow_rays;
    reflection_rays += o.reflection_rays;
    primary += o.primary;
    secondary += o.secondary;
    return *this;
  }
};

std::optional<Hit> intersect_scene(const Ray& ray, const Scene& scene, const AccelHandle& accel, double t_min,
                                   QueryStats* stats = nullptr);

/// Whitted local + reflected radiance at `hit`:
///   ambient*kd + sum_lights visible * I * (kd * max(0, n.l) + ks * max(0, r.v)^shininess)
///   + reflectivity * trace(mirror ray, depth_remaining - 1)
/// A light is visible when it lies on the front side of the hit normal and
/// a shadow ray from the biased hit point reaches it unoccluded. No falloff.
Color shade(const Hit& hit, const Ray& ray, const Scene& scene, const AccelHandle& accel,
            const TraceSettings& settings, int depth_remaining, TraceCounters* counters = nullptr);

/// Background if the ray misses, otherwise shade(). Counts `ray` as a
/// primary ray in `counters`.
Color trace(const Ray& ray, const Scene& scene, const AccelHandle& accel, const TraceSettings& settings,
            int depth_remaining, TraceCounters* counters = nullptr);

}  // namespace stereotrace
