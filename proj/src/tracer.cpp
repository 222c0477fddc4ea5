// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0

#include "stereotrace/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace stereotrace {

namespace {

Color trace_ray(const Ray& ray, const Scene& scene, const AccelHandle& accel, const TraceSettings& settings,
                int depth_remaining, TraceCounters* counters, bool primary);

bool light_visible(const Vec3& origin, const Vec3& light_position, const Scene& scene, const AccelHandle& accel,
                   const TraceSettings& settings, TraceCounters* counters) {
  const Vec3 to_light = light_position - origin;
  const double distance = length(to_light);
  if (!(distance > 0.0)) return true;
  const Ray shadow{origin, to_light * (1.0 / distance)};
  QueryOptions options;
  // Occluders strictly closer than the light.
  options.t_max = std::nextafter(distance, 0.0);
  if (counters) {
    ++counters->shadow_rays;
    options.stats = &counters->secondary;
  }
  return !query_nearest(accel, scene, shadow, settings.t_min, options).has_value();
}

Color shade_hit(const Hit& hit, const Ray& ray, const Scene& scene, const AccelHandle& accel,
                const TraceSettings& settings, int depth_remaining, TraceCounters* counters) {
  const Material& m = scene.objects()[hit.object_index].material;
  const Vec3& n = hit.normal;
  const Vec3 view = -ray.direction;
  const Vec3 biased = hit.point + n * settings.shadow_bias;

  Color color = scene.ambient() * m.diffuse;
  for (const PointLight& light : scene.lights()) {
    const Vec3 l = normalize(light.position - hit.point);
    const double n_dot_l = dot(n, l);
    if (!(n_dot_l > 0.0)) continue;
    if (!light_visible(biased, light.position, scene, accel, settings, counters)) continue;
    const Vec3 r = reflect(-l, n);
    const double r_dot_v = std::max(0.0, dot(r, view));
    const double highlight = std::pow(r_dot_v, m.shininess);
    color += m.diffuse * light.intensity * n_dot_l + m.specular * light.intensity * highlight;
  }

  if (depth_remaining > 0 && m.reflectivity > 0.0) {
    if (counters) ++counters->reflection_rays;
    const Ray mirror{biased, reflect(ray.direction, n)};
    color += m.reflectivity * trace_ray(mirror, scene, accel, settings, depth_remaining - 1, counters, false);
  }
  return color;
}

Color trace_ray(const Ray& ray, const Scene& scene, const AccelHandle& accel, const TraceSettings& settings,
                int depth_remaining, TraceCounters* counters, bool primary) {
  QueryStats* stats = nullptr;
  if (counters) {
    if (primary) ++counters->primary_rays;
    stats = primary ? &counters->primary : &counters->secondary;
  }
  const auto hit = intersect_scene(ray, scene, accel, settings.t_min, stats);
  if (!hit) return scene.background();
  return shade_hit(*hit, ray, scene, accel, settings, depth_remaining, counters);
}

}  // namespace

PinholeProjection::PinholeProjection(const Camera& camera, int width, int height)
    : origin_(camera.position), width_(width), height_(height) {
  forward_ = normalize(camera.look_at - camera.position);
  right_ = normalize(cross(forward_, camera.up));
  up_ = cross(right_, forward_);
  half_height_ = std::tan(camera.vertical_fov * std::numbers::pi / 360.0);
  half_width_ = half_height_ * camera.aspect;
}

Ray PinholeProjection::ray(int px, int py) const {
  const double sx = (2.0 * (px + 0.5) / width_ - 1.0) * half_width_;
  const double sy = (1.0 - 2.0 * (py + 0.5) / height_) * half_height_;
  return {origin_, normalize(forward_ + right_ * sx + up_ * sy)};
}

Ray generate_primary_ray(const Camera& camera, int px, int py, int width, int height) {
  if (px < 0 || py < 0 || px >= width || py >= height)
    throw std::out_of_range("pixel (" + std::to_string(px) + ", " + std::to_string(py) + ") outside " +
                            std::to_string(width) + "x" + std::to_string(height) + " raster");
  return PinholeProjection(camera, width, height).ray(px, py);
}

std::optional<Hit> intersect_scene(const Ray& ray, const Scene& scene, const AccelHandle& accel, double t_min,
                                   QueryStats* stats) {
  QueryOptions options;
  options.stats = stats;
  return query_nearest(accel, scene, ray, t_min, options);
}

Color shade(const Hit& hit, const Ray& ray, const Scene& scene, const AccelHandle& accel,
            const TraceSettings& settings, int depth_remaining, TraceCounters* counters) {
  return shade_hit(hit, ray, scene, accel, settings, depth_remaining, counters);
}

Color trace(const Ray& ray, const Scene& scene, const AccelHandle& accel, const TraceSettings& settings,
            int depth_remaining, TraceCounters* counters) {
  return trace_ray(ray, scene, accel, settings, depth_remaining, counters, true);
}

}  // namespace stereotrace
