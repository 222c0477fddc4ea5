// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0
//
// Test-only helpers: seeded generators and reference implementations that
// share no arithmetic with the library (plane solve + edge tests instead of
// the library's barycentric solve, straight-line Whitted shading, naive
// pixel loops).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "stereotrace/scene.hpp"
#include "stereotrace/image.hpp"
#include "stereotrace/ray.hpp"

namespace testing {

using stereotrace::Color;
using stereotrace::Vec3;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  std::uint8_t byte() { return static_cast<std::uint8_t>(integer(0, 255)); }

  Vec3 unit_vector() {
    for (;;) {
      const Vec3 v{uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)};
      const double len2 = v.x * v.x + v.y * v.y + v.z * v.z;
      if (len2 > 1e-4 && len2 <= 1.0) return v * (1.0 / std::sqrt(len2));
    }
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Rays from a sphere of radius 20 aimed at random points of the scene box,
/// with every fourth ray pointing in a uniformly random direction.
inline stereotrace::Ray random_scene_ray(Rng& rng, int i) {
  const Vec3 origin = rng.unit_vector() * 20.0;
  Vec3 dir;
  if (i % 4 == 3) {
    dir = rng.unit_vector();
  } else {
    const Vec3 target{rng.uniform(-6, 6), rng.uniform(-6, 6), rng.uniform(-6, 6)};
    dir = target - origin;
  }
  const double len = std::sqrt(dir.x * dir.x + dir.y * dir.y + dir.z * dir.z);
  return {origin, dir * (1.0 / len)};
}

inline stereotrace::Image random_image(Rng& rng, int w, int h) {
  stereotrace::Image img(w, h);
  for (auto& b : img.pixels) b = rng.byte();
  return img;
}

struct OracleHit {
  double t;
  std::size_t object;
  std::size_t face;
};

/// Ray/plane solve followed by three edge-side tests.
inline std::optional<double> oracle_triangle(const stereotrace::Ray& ray, const Vec3& a, const Vec3& b, const Vec3& c,
                                             double t_min) {
  const Vec3 n = stereotrace::cross(b - a, c - a);
  const double denom = stereotrace::dot(n, ray.direction);
  if (std::abs(denom) < 1e-12 * stereotrace::length(n)) return std::nullopt;
  const double t = stereotrace::dot(n, a - ray.origin) / denom;
  if (!(t > t_min)) return std::nullopt;
  const Vec3 p = ray.origin + ray.direction * t;
  const double scale = 1e-12 * stereotrace::dot(n, n);
  if (stereotrace::dot(stereotrace::cross(b - a, p - a), n) < -scale) return std::nullopt;
  if (stereotrace::dot(stereotrace::cross(c - b, p - b), n) < -scale) return std::nullopt;
  if (stereotrace::dot(stereotrace::cross(a - c, p - c), n) < -scale) return std::nullopt;
  return t;
}

/// Exhaustive nearest hit in (object, face) order; earlier wins at equal t.
inline std::optional<OracleHit> oracle_nearest(const stereotrace::Scene& scene, const stereotrace::Ray& ray,
                                               double t_min, double t_max = INFINITY) {
  std::optional<OracleHit> best;
  for (std::size_t o = 0; o < scene.objects().size(); ++o) {
    const auto& mesh = scene.objects()[o];
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
      const auto& face = mesh.faces[f];
      const auto t = oracle_triangle(ray, mesh.vertices[face[0]], mesh.vertices[face[1]], mesh.vertices[face[2]], t_min);
      if (t && *t <= t_max && (!best || *t < best->t)) best = OracleHit{*t, o, f};
    }
  }
  return best;
}

/// Straight-line Whitted shading over the exhaustive oracle.
inline Color oracle_trace(const stereotrace::Scene& scene, const stereotrace::Ray& ray,
                          const stereotrace::TraceSettings& settings, int depth) {
  using stereotrace::dot;
  const auto hit = oracle_nearest(scene, ray, settings.t_min);
  if (!hit) return scene.background();
  const auto& mesh = scene.objects()[hit->object];
  const auto& face = mesh.faces[hit->face];
  const Vec3 a = mesh.vertices[face[0]];
  Vec3 n = stereotrace::normalize(stereotrace::cross(mesh.vertices[face[1]] - a, mesh.vertices[face[2]] - a));
  if (dot(n, ray.direction) > 0) n = n * -1.0;
  const Vec3 p = ray.origin + ray.direction * hit->t;
  const Vec3 q = p + n * settings.shadow_bias;
  const auto& m = mesh.material;

  Color c{scene.ambient().r * m.diffuse.r, scene.ambient().g * m.diffuse.g, scene.ambient().b * m.diffuse.b};
  for (const auto& light : scene.lights()) {
    const Vec3 l = stereotrace::normalize(light.position - p);
    const double ndl = dot(n, l);
    if (ndl <= 0) continue;
    const Vec3 to_light = light.position - q;
    const double dist = stereotrace::length(to_light);
    const stereotrace::Ray shadow{q, to_light * (1.0 / dist)};
    const auto blocker = oracle_nearest(scene, shadow, settings.t_min);
    if (blocker && blocker->t < dist) continue;
    const Vec3 r = l * -1.0 - n * (2.0 * dot(l * -1.0, n));
    const double spec = std::pow(std::max(0.0, dot(r, ray.direction * -1.0)), m.shininess);
    c.r += light.intensity.r * (m.diffuse.r * ndl + m.specular.r * spec);
    c.g += light.intensity.g * (m.diffuse.g * ndl + m.specular.g * spec);
    c.b += light.intensity.b * (m.diffuse.b * ndl + m.specular.b * spec);
  }
  if (depth > 0 && m.reflectivity > 0) {
    const Vec3 d = ray.direction - n * (2.0 * dot(ray.direction, n));
    const Color rc = oracle_trace(scene, {q, d}, settings, depth - 1);
    c.r += m.reflectivity * rc.r;
    c.g += m.reflectivity * rc.g;
    c.b += m.reflectivity * rc.b;
  }
  return c;
}

/// Pinhole camera evaluated by hand: image plane at distance 1, pixel centers.
inline stereotrace::Ray oracle_primary_ray(const stereotrace::Camera& cam, int px, int py, int w, int h) {
  const Vec3 f = stereotrace::normalize(cam.look_at - cam.position);
  const Vec3 r = stereotrace::normalize(stereotrace::cross(f, cam.up));
  const Vec3 u = stereotrace::cross(r, f);
  const double hh = std::tan(cam.vertical_fov * M_PI / 360.0);
  const double hw = hh * cam.aspect;
  const double x = ((px + 0.5) / w * 2.0 - 1.0) * hw;
  const double y = (1.0 - (py + 0.5) / h * 2.0) * hh;
  return {cam.position, stereotrace::normalize(f + r * x + u * y)};
}

inline std::uint8_t oracle_byte(double c) {
  const double v = std::round(c * 255.0);
  return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
}

/// Fresh per-test scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("stereotrace_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
