// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0

#include "stereotrace/scene.hpp"

#include <bit>
#include <cmath>

#include "stereotrace/errors.hpp"

namespace stereotrace {

namespace {

// FNV-1a over the bit patterns of every field.
class RevisionHasher {
 public:
  void add(std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      state_ ^= (word >> (8 * i)) & 0xffu;
      state_ *= 0x100000001b3ull;
    }
  }
  void add(double v) { add(std::bit_cast<std::uint64_t>(v)); }
  void add(const Vec3& v) {
    add(v.x);
    add(v.y);
    add(v.z);
  }
  void add(const Color& c) {
    add(c.r);
    add(c.g);
    add(c.b);
  }
  void add(std::string_view s) {
    add(static_cast<std::uint64_t>(s.size()));
    for (char ch : s) add(static_cast<std::uint64_t>(static_cast<unsigned char>(ch)));
  }
  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ull;
};

void validate_color(const Color& c, const std::string& entity, const char* what) {
  if (!is_valid(c)) throw ValidationError(entity, std::string(what) + " must be finite and non-negative");
}

void validate_material(const Material& m, const std::string& entity) {
  validate_color(m.diffuse, entity, "diffuse color");
  validate_color(m.specular, entity, "specular color");
  if (!std::isfinite(m.shininess) || m.shininess < 1.0) throw ValidationError(entity, "shininess must be >= 1");
  if (!std::isfinite(m.reflectivity) || m.reflectivity < 0.0 || m.reflectivity > 1.0)
    throw ValidationError(entity, "reflectivity must be in [0, 1]");
}

void validate_mesh(const TriangleMesh& mesh, std::size_t index) {
  const std::string entity = "object " + std::to_string(index) + " '" + mesh.name + "'";
  validate_material(mesh.material, entity);
  if (mesh.vertices.empty() && !mesh.faces.empty()) throw ValidationError(entity, "faces without vertices");

  Vec3 lo = mesh.vertices.empty() ? Vec3{} : mesh.vertices.front();
  Vec3 hi = lo;
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Vec3& v = mesh.vertices[i];
    if (!is_finite(v)) throw ValidationError(entity, "vertex " + std::to_string(i) + " is not finite");
    lo = min(lo, v);
    hi = max(hi, v);
  }
  const Vec3 diag = hi - lo;
  const double min_area = 1e-12 * dot(diag, diag);

  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face& face = mesh.faces[f];
    for (std::uint32_t idx : face) {
      if (idx >= mesh.vertices.size())
        throw ValidationError(entity, "face " + std::to_string(f) + " references vertex " + std::to_string(idx) +
                                          " but the object has " + std::to_string(mesh.vertices.size()));
    }
    const Vec3 e1 = mesh.vertices[face[1]] - mesh.vertices[face[0]];
    const Vec3 e2 = mesh.vertices[face[2]] - mesh.vertices[face[0]];
    const double area = 0.5 * length(cross(e1, e2));
    if (!(area > min_area)) throw ValidationError(entity, "face " + std::to_string(f) + " is degenerate");
  }
}

}  // namespace

void validate_camera(const Camera& camera) {
  if (!is_finite(camera.position) || !is_finite(camera.look_at) || !is_finite(camera.up))
    throw ValidationError("camera", "non-finite vector");
  if (camera.position == camera.look_at) throw ValidationError("camera", "position equals look_at");
  if (!(camera.vertical_fov > 0.0 && camera.vertical_fov < 180.0))
    throw ValidationError("camera", "vertical fov must be in (0, 180) degrees");
  if (!(camera.aspect > 0.0) || !std::isfinite(camera.aspect)) throw ValidationError("camera", "aspect must be > 0");
  const double up_len = length(camera.up);
  if (!(up_len > 0.0)) throw ValidationError("camera", "up vector is zero");
  const Vec3 forward = normalize(camera.look_at - camera.position);
  if (!(length(cross(forward, camera.up * (1.0 / up_len))) > 1e-9))
    throw ValidationError("camera", "up is parallel to the view direction");
}

Camera default_camera() { return Camera{}; }

Scene::Scene() : Scene({}, {}, Color{}, Color{}) {}

Scene::Scene(std::vector<TriangleMesh> objects, std::vector<PointLight> lights, Color ambient, Color background)
    : objects_(std::move(objects)), lights_(std::move(lights)), ambient_(ambient), background_(background) {
  validate_color(ambient_, "scene", "ambient");
  validate_color(background_, "scene", "background");
  for (std::size_t i = 0; i < lights_.size(); ++i) {
    const std::string entity = "light " + std::to_string(i);
    if (!is_finite(lights_[i].position)) throw ValidationError(entity, "position is not finite");
    validate_color(lights_[i].intensity, entity, "intensity");
  }
  for (std::size_t i = 0; i < objects_.size(); ++i) validate_mesh(objects_[i], i);

  RevisionHasher h;
  h.add(ambient_);
  h.add(background_);
  h.add(static_cast<std::uint64_t>(lights_.size()));
  for (const PointLight& l : lights_) {
    h.add(l.position);
    h.add(l.intensity);
  }
  h.add(static_cast<std::uint64_t>(objects_.size()));
  for (const TriangleMesh& m : objects_) {
    h.add(m.name);
    h.add(m.material.diffuse);
    h.add(m.material.specular);
    h.add(m.material.shininess);
    h.add(m.material.reflectivity);
    h.add(static_cast<std::uint64_t>(m.vertices.size()));
    for (const Vec3& v : m.vertices) h.add(v);
    h.add(static_cast<std::uint64_t>(m.faces.size()));
    for (const Face& f : m.faces)
      for (std::uint32_t idx : f) h.add(static_cast<std::uint64_t>(idx));
  }
  revision_ = h.value();
}

std::size_t Scene::triangle_count() const {
  std::size_t n = 0;
  for (const TriangleMesh& m : objects_) n += m.faces.size();
  return n;
}

}  // namespace stereotrace
