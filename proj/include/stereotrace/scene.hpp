// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "stereotrace/math.hpp"

namespace stereotrace {

struct Material {
  Color diffuse{0.8, 0.8, 0.8};
  Color specular{0.0, 0.0, 0.0};
  double shininess = 1.0;     // >= 1
  double reflectivity = 0.0;  // [0, 1]

  friend bool operator==(const Material&, const Material&) = default;
};

using Face = std::array<std::uint32_t, 3>;

/// Triangle mesh with one material. Faces are counter-clockwise seen from
/// outside for the built-in solids; the tracer does not rely on winding.
struct TriangleMesh {
  std::string name;
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
  Material material;

  friend bool operator==(const TriangleMesh&, const TriangleMesh&) = default;
};

struct PointLight {
  Vec3 position;
  Color intensity{1.0, 1.0, 1.0};

  friend bool operator==(const PointLight&, const PointLight&) = default;
};

struct Camera {
  Vec3 position{0.0, 0.0, 15.0};
  Vec3 look_at{0.0, 0.0, 0.0};
  Vec3 up{0.0, 1.0, 0.0};
  double vertical_fov = 45.0;  // degrees, (0, 180)
  double aspect = 1.0;         // width / height of the image plane

  friend bool operator==(const Camera&, const Camera&) = default;
};

/// Throws ValidationError("camera", ...) if the camera cannot define a basis.
void validate_camera(const Camera& camera);

/// Immutable, validated world description. Construction checks every member
/// invariant and derives a content revision used to pair acceleration
/// structures with the scene they were built from.
class Scene {
 public:
  Scene();
  Scene(std::vector<TriangleMesh> objects, std::vector<PointLight> lights, Color ambient, Color background);

  const std::vector<TriangleMesh>& objects() const { return objects_; }
  const std::vector<PointLight>& lights() const { return lights_; }
  const Color& ambient() const { return ambient_; }
  const Color& background() const { return background_; }
  std::uint64_t revision() const { return revision_; }

  std::size_t triangle_count() const;

  friend bool operator==(const Scene&, const Scene&) = default;

 private:
  std::vector<TriangleMesh> objects_;
  std::vector<PointLight> lights_;
  Color ambient_;
  Color background_;
  std::uint64_t revision_ = 0;
};

inline constexpr double kDefaultEyeSeparation = 0.065;

Camera default_camera();

/// Everything a scene file describes: world, viewing camera and stereo base.
struct SceneDocument {
  Scene scene;
  Camera camera = default_camera();
  double eye_separation = kDefaultEyeSeparation;

  friend bool operator==(const SceneDocument&, const SceneDocument&) = default;
};

SceneDocument parse_scene(std::string_view text);
SceneDocument load_scene_document(const std::filesystem::path& path);
Scene load_scene(const std::filesystem::path& path);

/// Lossless text form; parse_scene(serialize_scene(d)) == d.
std::string serialize_scene(const SceneDocument& doc, std::string_view header_comment = {});
void save_scene(const std::filesystem::path& path, const SceneDocument& doc, std::string_view header_comment = {});

enum class BuiltinKind { Cube, Icosahedron, Dodeca36 };

std::string_view to_string(BuiltinKind kind);
bool parse_builtin_kind(std::string_view text, BuiltinKind& out);

/// Cube: 8 vertices / 12 triangles, vertices at center +- scale/2.
/// Icosahedron: 12 / 20. Dodeca36: regular dodecahedron with each pentagon
/// fanned into three triangles, 20 / 36. The two round solids have
/// circumradius scale/2.
TriangleMesh builtin_object(BuiltinKind kind, const Vec3& center, double scale, const Material& material);

inline constexpr std::array<int, 5> kPaperSceneCounts{1, 2, 3, 5, 6};

bool is_paper_scene_count(int object_count);

/// Fixed experiment scenes with 1, 2, 3, 5 or 6 objects and one light.
Scene paper_scene(int object_count);

}  // namespace stereotrace
