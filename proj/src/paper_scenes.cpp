// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stereotrace/errors.hpp"
#include "stereotrace/scene.hpp"

namespace stereotrace {

namespace {

constexpr double kPhi = std::numbers::phi;

// Reorders each face so its normal points away from `center`. Valid for
// convex solids that contain their center.
void orient_outward(std::vector<Face>& faces, const std::vector<Vec3>& vertices, const Vec3& center) {
  for (Face& f : faces) {
    const Vec3& a = vertices[f[0]];
    const Vec3& b = vertices[f[1]];
    const Vec3& c = vertices[f[2]];
    const Vec3 n = cross(b - a, c - a);
    const Vec3 centroid = (a + b + c) * (1.0 / 3.0);
    if (dot(n, centroid - center) < 0.0) std::swap(f[1], f[2]);
  }
}

std::vector<Vec3> unit_icosahedron() {
  std::vector<Vec3> v;
  for (double s1 : {-1.0, 1.0})
    for (double s2 : {-1.0, 1.0}) {
      v.push_back({0.0, s1, s2 * kPhi});
      v.push_back({s1, s2 * kPhi, 0.0});
      v.push_back({s2 * kPhi, 0.0, s1});
    }
  return v;
}

std::vector<Face> icosahedron_faces(const std::vector<Vec3>& v) {
  // Edge length is 2 for the canonical coordinates; faces are mutually adjacent triples.
  auto adjacent = [&](std::size_t i, std::size_t j) { return std::abs(length(v[i] - v[j]) - 2.0) < 1e-9; };
  std::vector<Face> faces;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      for (std::size_t k = j + 1; k < v.size(); ++k)
        if (adjacent(i, j) && adjacent(j, k) && adjacent(i, k))
          faces.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(k)});
  return faces;
}

std::vector<Vec3> unit_dodecahedron() {
  std::vector<Vec3> v;
  for (double sx : {-1.0, 1.0})
    for (double sy : {-1.0, 1.0})
      for (double sz : {-1.0, 1.0}) v.push_back({sx, sy, sz});
  for (double s1 : {-1.0, 1.0})
    for (double s2 : {-1.0, 1.0}) {
      v.push_back({0.0, s1 / kPhi, s2 * kPhi});
      v.push_back({s1 / kPhi, s2 * kPhi, 0.0});
      v.push_back({s2 * kPhi, 0.0, s1 / kPhi});
    }
  return v;
}

// Face normals of unit_dodecahedron(): the vertices of its dual icosahedron.
std::vector<Vec3> dodecahedron_face_axes() {
  std::vector<Vec3> a;
  for (double s1 : {-1.0, 1.0})
    for (double s2 : {-1.0, 1.0}) {
      a.push_back({0.0, s1 * kPhi, s2});
      a.push_back({s1 * kPhi, s2, 0.0});
      a.push_back({s2, 0.0, s1 * kPhi});
    }
  return a;
}

// Each pentagon is the set of five vertices furthest along one face axis.
std::vector<Face> dodecahedron_faces(const std::vector<Vec3>& v) {
  std::vector<Face> faces;
  for (const Vec3& axis_raw : dodecahedron_face_axes()) {
    const Vec3 axis = normalize(axis_raw);
    double best = -1e300;
    for (const Vec3& p : v) best = std::max(best, dot(p, axis));
    std::vector<std::uint32_t> ring;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (dot(v[i], axis) > best - 1e-9) ring.push_back(static_cast<std::uint32_t>(i));

    const Vec3 u = normalize(v[ring[0]] - axis * dot(v[ring[0]], axis));
    const Vec3 w = cross(axis, u);
    auto angle = [&](std::uint32_t i) { return std::atan2(dot(v[i], w), dot(v[i], u)); };
    std::sort(ring.begin(), ring.end(), [&](std::uint32_t a, std::uint32_t b) { return angle(a) < angle(b); });
    for (std::size_t k = 1; k + 1 < ring.size(); ++k) faces.push_back({ring[0], ring[k], ring[k + 1]});
  }
  return faces;
}

Material make_material(Color diffuse, double specular, double shininess, double reflectivity) {
  Material m;
  m.diffuse = diffuse;
  m.specular = {specular, specular, specular};
  m.shininess = shininess;
  m.reflectivity = reflectivity;
  return m;
}

}  // namespace

std::string_view to_string(BuiltinKind kind) {
  switch (kind) {
    case BuiltinKind::Cube: return "cube";
    case BuiltinKind::Icosahedron: return "icosahedron";
    case BuiltinKind::Dodeca36: return "dodeca36";
  }
  return "unknown";
}

bool parse_builtin_kind(std::string_view text, BuiltinKind& out) {
  for (BuiltinKind k : {BuiltinKind::Cube, BuiltinKind::Icosahedron, BuiltinKind::Dodeca36}) {
    if (text == to_string(k)) {
      out = k;
      return true;
    }
  }
  return false;
}

TriangleMesh builtin_object(BuiltinKind kind, const Vec3& center, double scale, const Material& material) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ValidationError(std::string(to_string(kind)), "scale must be > 0");

  TriangleMesh mesh;
  mesh.name = std::string(to_string(kind));
  mesh.material = material;

  std::vector<Vec3> unit;
  double unit_scale = 1.0;
  switch (kind) {
    case BuiltinKind::Cube: {
      for (int i = 0; i < 8; ++i) unit.push_back({(i & 1) ? 0.5 : -0.5, (i & 2) ? 0.5 : -0.5, (i & 4) ? 0.5 : -0.5});
      constexpr std::uint32_t quads[6][4] = {{0, 2, 6, 4}, {1, 3, 7, 5}, {0, 1, 5, 4},
                                             {2, 3, 7, 6}, {0, 1, 3, 2}, {4, 5, 7, 6}};
      for (const auto& q : quads) {
        mesh.faces.push_back({q[0], q[1], q[2]});
        mesh.faces.push_back({q[0], q[2], q[3]});
      }
      break;
    }
    case BuiltinKind::Icosahedron:
      unit = unit_icosahedron();
      mesh.faces = icosahedron_faces(unit);
      unit_scale = 0.5 / std::sqrt(1.0 + kPhi * kPhi);
      break;
    case BuiltinKind::Dodeca36:
      unit = unit_dodecahedron();
      mesh.faces = dodecahedron_faces(unit);
      unit_scale = 0.5 / std::sqrt(3.0);
      break;
  }

  mesh.vertices.reserve(unit.size());
  for (const Vec3& p : unit) mesh.vertices.push_back(center + p * (unit_scale * scale));
  orient_outward(mesh.faces, mesh.vertices, center);
  return mesh;
}

bool is_paper_scene_count(int object_count) {
  return std::find(kPaperSceneCounts.begin(), kPaperSceneCounts.end(), object_count) != kPaperSceneCounts.end();
}

Scene paper_scene(int object_count) {
  if (!is_paper_scene_count(object_count)) throw UnsupportedCount(object_count);

  const Material red = make_material({0.8, 0.2, 0.2}, 0.5, 32.0, 0.2);
  const Material green = make_material({0.2, 0.7, 0.3}, 0.3, 16.0, 0.1);
  const Material blue = make_material({0.25, 0.35, 0.85}, 0.6, 64.0, 0.3);
  const Material gold = make_material({0.8, 0.65, 0.2}, 0.4, 24.0, 0.25);

  using K = BuiltinKind;
  struct Placement {
    K kind;
    Vec3 center;
    double scale;
    const Material* material;
  };
  std::vector<Placement> layout;
  switch (object_count) {
    case 1:
      layout = {{K::Cube, {-1.5, 1.0, 0.0}, 3.0, &red}};
      break;
    case 2:
      layout = {{K::Cube, {-2.5, 0.5, 0.0}, 2.5, &red}, {K::Icosahedron, {2.5, -0.5, 0.0}, 3.5, &blue}};
      break;
    case 3:
      layout = {{K::Cube, {-3.5, -1.5, 0.0}, 2.5, &red},
                {K::Icosahedron, {0.0, 1.5, -1.0}, 3.0, &blue},
                {K::Dodeca36, {3.2, -1.5, 0.0}, 3.5, &green}};
      break;
    case 5:
      layout = {{K::Cube, {-3.5, 2.5, 0.0}, 2.5, &red},
                {K::Cube, {3.5, -2.5, 0.0}, 2.5, &gold},
                {K::Icosahedron, {3.5, 2.5, 0.0}, 3.0, &blue},
                {K::Icosahedron, {-3.5, -2.5, 0.0}, 3.0, &green},
                {K::Dodeca36, {0.0, 0.0, 0.0}, 3.5, &gold}};
      break;
    case 6:
      layout = {{K::Cube, {-3.5, 2.5, 0.0}, 2.5, &red},
                {K::Icosahedron, {0.0, 2.5, 0.0}, 3.0, &blue},
                {K::Dodeca36, {3.5, 2.5, 0.0}, 3.0, &green},
                {K::Dodeca36, {-3.5, -2.5, 0.0}, 3.0, &gold},
                {K::Cube, {0.0, -2.5, 0.0}, 2.5, &green},
                {K::Cube, {3.5, -2.5, 0.0}, 2.5, &red}};
      break;
  }

  std::vector<TriangleMesh> objects;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const Placement& p = layout[i];
    TriangleMesh mesh = builtin_object(p.kind, p.center, p.scale, *p.material);
    mesh.name += "_" + std::to_string(i);
    objects.push_back(std::move(mesh));
  }
  std::vector<PointLight> lights{{{6.0, 8.0, 12.0}, {1.0, 1.0, 1.0}}};
  return Scene(std::move(objects), std::move(lights), Color{0.1, 0.1, 0.1}, Color{0.05, 0.05, 0.08});
}

}  // namespace stereotrace
