// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "stereotrace/accel.hpp"
#include "stereotrace/errors.hpp"
#include "stereotrace/tracer.hpp"
#include "stereotrace/triangle.hpp"
#include "support.hpp"

using namespace stereotrace;

namespace {

TriangleMesh triangle_mesh(std::string name, Vec3 a, Vec3 b, Vec3 c, Material m = {}) {
  TriangleMesh mesh;
  mesh.name = std::move(name);
  mesh.vertices = {a, b, c};
  mesh.faces = {{0, 1, 2}};
  mesh.material = m;
  return mesh;
}

// Large square in the plane z = z0, two triangles.
TriangleMesh square_at_z(std::string name, double z0, double half, Material m = {}) {
  TriangleMesh mesh;
  mesh.name = std::move(name);
  mesh.vertices = {{-half, -half, z0}, {half, -half, z0}, {half, half, z0}, {-half, half, z0}};
  mesh.faces = {{0, 1, 2}, {0, 2, 3}};
  mesh.material = m;
  return mesh;
}

bool near(const Vec3& a, const Vec3& b, double eps) {
  return std::abs(a.x - b.x) <= eps && std::abs(a.y - b.y) <= eps && std::abs(a.z - b.z) <= eps;
}

bool near(const Color& a, const Color& b, double eps) {
  return std::abs(a.r - b.r) <= eps && std::abs(a.g - b.g) <= eps && std::abs(a.b - b.b) <= eps;
}

}  // namespace

TEST_CASE("1x1 primary ray follows the optical axis") {
  testing::Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    Camera cam;
    cam.position = {rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)};
    cam.look_at = cam.position + rng.unit_vector() * rng.uniform(0.5, 20);
    cam.up = rng.unit_vector();
    cam.vertical_fov = rng.uniform(1, 179);
    cam.aspect = rng.uniform(0.2, 5);
    const Ray r = generate_primary_ray(cam, 0, 0, 1, 1);
    CHECK(near(r.direction, normalize(cam.look_at - cam.position), 1e-12));
    CHECK(r.origin == cam.position);
  }
}

TEST_CASE("2x2 raster with 90 degree fov") {
  Camera cam;
  cam.position = {0, 0, 15};
  cam.vertical_fov = 90;
  const Ray r = generate_primary_ray(cam, 0, 0, 2, 2);
  CHECK(near(r.direction, normalize(Vec3{-0.5, 0.5, -1}), 1e-12));
  CHECK(near(generate_primary_ray(cam, 1, 1, 2, 2).direction, normalize(Vec3{0.5, -0.5, -1}), 1e-12));
}

TEST_CASE("primary rays match the hand-evaluated camera basis") {
  testing::Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    Camera cam;
    cam.position = {rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(5, 20)};
    cam.look_at = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    cam.vertical_fov = rng.uniform(10, 150);
    cam.aspect = rng.uniform(0.5, 2);
    const int w = rng.integer(1, 300), h = rng.integer(1, 300);
    const int px = rng.integer(0, w - 1), py = rng.integer(0, h - 1);
    const Ray r = generate_primary_ray(cam, px, py, w, h);
    CHECK(std::abs(length(r.direction) - 1.0) < 1e-12);
    CHECK(near(r.direction, testing::oracle_primary_ray(cam, px, py, w, h).direction, 1e-12));
  }
}

TEST_CASE("primary ray pixel bounds are enforced") {
  const Camera cam;
  CHECK_THROWS_AS(generate_primary_ray(cam, 4, 0, 4, 4), std::out_of_range);
  CHECK_THROWS_AS(generate_primary_ray(cam, 0, 4, 4, 4), std::out_of_range);
  CHECK_THROWS_AS(generate_primary_ray(cam, -1, 0, 4, 4), std::out_of_range);
  CHECK_NOTHROW(generate_primary_ray(cam, 3, 3, 4, 4));
}

TEST_CASE("triangle intersection examples") {
  const Vec3 a{-1, -1, 5}, b{3, -1, 5}, c{-1, 3, 5};
  const auto hit = intersect_triangle({{0, 0, 0}, {0, 0, 1}}, a, b, c, 1e-4);
  REQUIRE(hit);
  CHECK(hit->t == 5.0);
  CHECK(hit->u >= 0.0);
  CHECK(hit->v >= 0.0);
  CHECK(hit->u + hit->v <= 1.0);
  CHECK_FALSE(intersect_triangle({{0, 0, 0}, {0, 0, -1}}, a, b, c, 1e-4));
  // Ray lying in the triangle's plane.
  CHECK_FALSE(intersect_triangle({{-5, 0, 5}, {1, 0, 0}}, a, b, c, 1e-4));
  // t must exceed t_min.
  CHECK_FALSE(intersect_triangle({{0, 0, 4.99995}, {0, 0, 1}}, a, b, c, 1e-4));
}

TEST_CASE("triangle edges and vertices count as hits") {
  const Vec3 a{0, 0, 0}, b{1, 0, 0}, c{0, 1, 0};
  for (const Vec3& p : {a, b, c, Vec3{0.5, 0, 0}, Vec3{0, 0.5, 0}, Vec3{0.5, 0.5, 0}}) {
    CAPTURE(p.x);
    CAPTURE(p.y);
    CHECK(intersect_triangle({p + Vec3{0, 0, 2}, {0, 0, -1}}, a, b, c, 1e-4));
  }
  CHECK_FALSE(intersect_triangle({{0.5, 0.5 + 1e-9, 2}, {0, 0, -1}}, a, b, c, 1e-4));
}

TEST_CASE("triangle intersection agrees with the plane-and-edges oracle") {
  testing::Rng rng(3);
  int hits = 0;
  for (int i = 0; i < 5000; ++i) {
    const Vec3 a{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const Vec3 b{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const Vec3 c{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    if (length(cross(b - a, c - a)) < 1e-2) continue;
    // Aim at a point near the triangle so roughly half the rays hit.
    const double bu = rng.uniform(-0.3, 1.0), bv = rng.uniform(-0.3, 1.0);
    const Vec3 target = a + (b - a) * bu + (c - a) * bv;
    const Vec3 origin = rng.unit_vector() * 6.0;
    const Ray ray{origin, normalize(target - origin)};
    const auto got = intersect_triangle(ray, a, b, c, 1e-4);
    const auto want = testing::oracle_triangle(ray, a, b, c, 1e-4);
    REQUIRE(got.has_value() == want.has_value());
    if (got) {
      ++hits;
      CHECK(got->t == doctest::Approx(*want).epsilon(1e-9));
      const Vec3 p = a + (b - a) * got->u + (c - a) * got->v;
      CHECK(near(p, ray.at(got->t), 1e-9));
    }
  }
  CHECK(hits > 100);
}

TEST_CASE("intersect_scene finds the nearest hit") {
  SUBCASE("empty scene") {
    const Scene s;
    CHECK_FALSE(intersect_scene({{0, 0, 0}, {0, 0, 1}}, s, build_bvh(s), 1e-4));
    CHECK_FALSE(intersect_scene({{0, 0, 0}, {0, 0, 1}}, s, build_linear(s), 1e-4));
  }
  SUBCASE("stacked triangles at t = 7 and t = 5") {
    const Scene s({triangle_mesh("far", {-1, -1, 7}, {3, -1, 7}, {-1, 3, 7}),
                   triangle_mesh("near", {-1, -1, 5}, {3, -1, 5}, {-1, 3, 5})},
                  {}, {}, {});
    for (const AccelHandle& accel : {build_linear(s), build_bvh(s)}) {
      const auto hit = intersect_scene({{0, 0, 0}, {0, 0, 1}}, s, accel, 1e-4);
      REQUIRE(hit);
      CHECK(hit->t == 5.0);
      CHECK(hit->object_index == 1);
      CHECK(hit->point == Vec3{0, 0, 5});
      CHECK(hit->normal == Vec3{0, 0, -1});
    }
  }
  SUBCASE("coincident faces resolve to the smaller object index") {
    const Scene s({triangle_mesh("a", {-1, -1, 5}, {3, -1, 5}, {-1, 3, 5}),
                   triangle_mesh("b", {-1, -1, 5}, {3, -1, 5}, {-1, 3, 5})},
                  {}, {}, {});
    for (const AccelHandle& accel : {build_linear(s), build_bvh(s)}) {
      const auto hit = intersect_scene({{0, 0, 0}, {0, 0, 1}}, s, accel, 1e-4);
      REQUIRE(hit);
      CHECK(hit->object_index == 0);
    }
  }
  SUBCASE("accel built for another scene") {
    const Scene s = paper_scene(1);
    CHECK_THROWS_AS(intersect_scene({{0, 0, 15}, {0, 0, -1}}, s, build_bvh(paper_scene(2)), 1e-4), AccelMismatch);
  }
}

TEST_CASE("hit invariants and nearest-hit against an exhaustive loop") {
  testing::Rng rng(4);
  for (int n : kPaperSceneCounts) {
    const Scene s = paper_scene(n);
    REQUIRE(s.triangle_count() <= 200);
    const AccelHandle bvh = build_bvh(s);
    for (int i = 0; i < 400; ++i) {
      const Ray ray = testing::random_scene_ray(rng, i);
      const auto got = intersect_scene(ray, s, bvh, 1e-4);
      const auto want = testing::oracle_nearest(s, ray, 1e-4);
      REQUIRE(got.has_value() == want.has_value());
      if (!got) continue;
      CHECK(got->t == doctest::Approx(want->t).epsilon(1e-9));
      CHECK(got->object_index == want->object);
      CHECK(got->face_index == want->face);
      CHECK(got->t > 0.0);
      CHECK(near(got->point, ray.at(got->t), 1e-6 * (1 + got->t)));
      CHECK(dot(got->normal, ray.direction) <= 0.0);
      CHECK(std::abs(length(got->normal) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("shading examples") {
  Material gray;
  gray.diffuse = {0.5, 0.5, 0.5};
  const TriangleMesh floor = square_at_z("floor", 0, 10, gray);
  const Ray down{{0.3, 0.2, 5}, {0, 0, -1}};
  TraceSettings settings;

  SUBCASE("light along the normal") {
    const Scene s({floor}, {{{0.3, 0.2, 8}, {1, 1, 1}}}, {0, 0, 0}, {});
    const AccelHandle accel = build_bvh(s);
    const auto hit = intersect_scene(down, s, accel, settings.t_min);
    REQUIRE(hit);
    CHECK(near(shade(*hit, down, s, accel, settings, settings.max_depth), {0.5, 0.5, 0.5}, 1e-12));
  }
  SUBCASE("occluded light leaves ambient times diffuse") {
    const TriangleMesh blocker = square_at_z("blocker", 6, 1);
    const Scene s({floor, blocker}, {{{0.3, 0.2, 8}, {1, 1, 1}}}, {0.2, 0.2, 0.2}, {});
    const AccelHandle accel = build_bvh(s);
    const auto hit = intersect_scene(down, s, accel, settings.t_min);
    REQUIRE(hit);
    CHECK(hit->object_index == 0);
    CHECK(near(shade(*hit, down, s, accel, settings, settings.max_depth), {0.1, 0.1, 0.1}, 1e-12));
  }
  SUBCASE("empty scene returns the background") {
    const Scene s({}, {}, {}, {0.2, 0.3, 0.4});
    CHECK(trace(down, s, build_bvh(s), settings, 3) == Color{0.2, 0.3, 0.4});
  }
  SUBCASE("pure ambient surface") {
    Material white;
    white.diffuse = {1, 1, 1};
    const Scene s({square_at_z("floor", 0, 10, white)}, {}, {0.1, 0.1, 0.1}, {0.9, 0.9, 0.9});
    CHECK(near(trace(down, s, build_bvh(s), settings, 3), {0.1, 0.1, 0.1}, 1e-15));
  }
  SUBCASE("specular highlight at the mirror direction") {
    Material shiny = gray;
    shiny.specular = {0.25, 0.5, 1.0};
    shiny.shininess = 10;
    // Light straight above the hit point, eye straight above: r = v.
    const Scene s({square_at_z("floor", 0, 10, shiny)}, {{{0.3, 0.2, 8}, {1, 1, 1}}}, {}, {});
    CHECK(near(trace(down, s, build_bvh(s), settings, 3), {0.75, 1.0, 1.5}, 1e-12));
  }
  SUBCASE("light behind the surface contributes nothing") {
    const Scene s({floor}, {{{0.3, 0.2, -8}, {1, 1, 1}}}, {0.1, 0.1, 0.1}, {});
    CHECK(near(trace(down, s, build_bvh(s), settings, 3), {0.05, 0.05, 0.05}, 1e-15));
  }
}

TEST_CASE("two facing mirrors recurse exactly max_depth times") {
  Material mirror;
  mirror.diffuse = {0.1, 0.1, 0.1};
  mirror.reflectivity = 1.0;
  const Scene s({square_at_z("low", 0, 10, mirror), square_at_z("high", 4, 10, mirror)}, {}, {0.5, 0.5, 0.5}, {});
  const AccelHandle accel = build_bvh(s);
  const Ray ray{{0, 0, 2}, {0, 0, -1}};
  for (int depth = 0; depth <= 6; ++depth) {
    TraceSettings settings;
    settings.max_depth = depth;
    TraceCounters counters;
    const Color c = trace(ray, s, accel, settings, depth, &counters);
    CHECK(counters.primary_rays == 1);
    CHECK(counters.reflection_rays == static_cast<std::uint64_t>(depth));
    // Each bounce adds the local term 0.05 once: sum over depth + 1 hits.
    CHECK(c.r == doctest::Approx(0.05 * (depth + 1)).epsilon(1e-12));
  }
}

TEST_CASE("reflect examples and properties") {
  CHECK(near(reflect(normalize(Vec3{1, -1, 0}), {0, 1, 0}), normalize(Vec3{1, 1, 0}), 1e-15));
  CHECK(reflect({0, 0, -1}, {0, 0, 1}) == Vec3{0, 0, 1});
  testing::Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 d = rng.unit_vector();
    const Vec3 n = rng.unit_vector();
    const Vec3 r = reflect(d, n);
    CHECK(std::abs(length(r) - 1.0) < 1e-9);
    CHECK(near(reflect(r, n), d, 1e-9));
    // Equal angles with the normal, opposite sides.
    CHECK(std::abs(dot(r, n) + dot(d, n)) < 1e-9);
  }
}

TEST_CASE("removing an occluder never darkens a pixel") {
  Material m;
  m.diffuse = {0.7, 0.6, 0.5};
  m.specular = {0.3, 0.3, 0.3};
  m.shininess = 20;
  const TriangleMesh floor = square_at_z("floor", 0, 10, m);
  const TriangleMesh blocker = triangle_mesh("blocker", {-2, -2, 3}, {2, -2, 3}, {0, 2, 3});
  const std::vector<PointLight> lights{{{1, 1, 8}, {1, 1, 1}}};
  const Scene with({floor, blocker}, lights, {0.1, 0.1, 0.1}, {});
  const Scene without({floor}, lights, {0.1, 0.1, 0.1}, {});
  Camera cam;
  cam.position = {0, -6, 10};
  const AccelHandle aw = build_bvh(with), ao = build_bvh(without);
  const TraceSettings settings;
  int darker = 0;
  for (int y = 0; y < 24; ++y)
    for (int x = 0; x < 24; ++x) {
      const Ray r = generate_primary_ray(cam, x, y, 24, 24);
      // Only pixels that see the floor in both scenes are comparable.
      const auto hw = intersect_scene(r, with, aw, settings.t_min);
      if (!hw || hw->object_index != 0) continue;
      const Color cw = trace(r, with, aw, settings, 3);
      const Color co = trace(r, without, ao, settings, 3);
      CHECK(co.r >= cw.r);
      CHECK(co.g >= cw.g);
      CHECK(co.b >= cw.b);
      if (co.r > cw.r) ++darker;
    }
  CHECK(darker > 0);  // the blocker does cast a shadow
}

TEST_CASE("trace matches the straight-line shading oracle") {
  const TraceSettings settings;
  for (int n : kPaperSceneCounts) {
    const Scene s = paper_scene(n);
    const AccelHandle accel = build_bvh(s);
    Camera cam = default_camera();
    for (int y = 0; y < 64; y += 7)
      for (int x = 0; x < 64; x += 7) {
        const Ray r = generate_primary_ray(cam, x, y, 64, 64);
        const Color got = trace(r, s, accel, settings, settings.max_depth);
        const Color want = testing::oracle_trace(s, r, settings, settings.max_depth);
        CHECK(near(got, want, 1e-9));
      }
  }
  SUBCASE("with reflective materials") {
    Material mirror;
    mirror.diffuse = {0.2, 0.3, 0.4};
    mirror.specular = {0.5, 0.5, 0.5};
    mirror.shininess = 8;
    mirror.reflectivity = 0.6;
    std::vector<TriangleMesh> objects = paper_scene(3).objects();
    objects.push_back(square_at_z("back", -4, 8, mirror));
    for (auto& o : objects) o.material.reflectivity = 0.3;
    const Scene s(objects, {{{6, 8, 12}, {1, 1, 1}}, {{-6, 2, 10}, {0.5, 0.4, 0.3}}}, {0.1, 0.1, 0.1},
                  {0.05, 0.05, 0.08});
    const AccelHandle accel = build_bvh(s);
    for (int y = 0; y < 32; y += 3)
      for (int x = 0; x < 32; x += 3) {
        const Ray r = generate_primary_ray(default_camera(), x, y, 32, 32);
        CHECK(near(trace(r, s, accel, settings, 4), testing::oracle_trace(s, r, settings, 4), 1e-9));
      }
  }
}

TEST_CASE("trace is deterministic and finite") {
  const Scene s = paper_scene(6);
  const AccelHandle accel = build_bvh(s);
  testing::Rng rng(6);
  for (int depth = 0; depth <= 8; ++depth) {
    TraceSettings settings;
    settings.max_depth = depth;
    for (int i = 0; i < 50; ++i) {
      const Ray r = testing::random_scene_ray(rng, i);
      const Color a = trace(r, s, accel, settings, depth);
      const Color b = trace(r, s, accel, settings, depth);
      CHECK(a == b);
      CHECK(is_valid(a));
    }
  }
}
