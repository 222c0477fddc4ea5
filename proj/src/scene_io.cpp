// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0

// Line-oriented scene file reader and writer.
//
//   camera <pos xyz> <lookat xyz> <up xyz> <vfov_deg> [aspect]
//   stereo <eye_separation>
//   light <pos xyz> <intensity rgb>
//   ambient <rgb> | background <rgb>
//   object begin <name> ... v <xyz> ... f <i j k ...> ... material <kd> <ks> <shininess> <reflectivity> ... object end
//   builtin <cube|icosahedron|dodeca36> <center xyz> <scale> <kd> <ks> <shininess> <reflectivity>
//
// Face indices are 0-based; n-gons are fanned from their first vertex.

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "stereotrace/errors.hpp"
#include "stereotrace/scene.hpp"

namespace stereotrace {

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

class LineReader {
 public:
  LineReader(std::size_t line, std::vector<std::string_view> tokens) : line_(line), tokens_(std::move(tokens)) {}

  std::size_t remaining() const { return tokens_.size() - pos_; }

  void expect_remaining(std::size_t n, const char* what) const {
    if (remaining() != n)
      throw ParseError(line_, std::string(what) + " expects " + std::to_string(n) + " values, got " +
                                  std::to_string(remaining()));
  }

  std::string_view word() {
    if (pos_ >= tokens_.size()) throw ParseError(line_, "unexpected end of record");
    return tokens_[pos_++];
  }

  double number() {
    std::string_view tok = word();
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      throw ParseError(line_, "invalid number '" + std::string(tok) + "'");
    if (!std::isfinite(value)) throw ValidationError("line " + std::to_string(line_), "non-finite number");
    return value;
  }

  std::uint32_t index() {
    const std::string_view tok = word();
    std::uint32_t value = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      throw ParseError(line_, "invalid vertex index '" + std::string(tok) + "'");
    return value;
  }

  Vec3 vec3() {
    const double x = number();
    const double y = number();
    const double z = number();
    return {x, y, z};
  }

  Color color() {
    const double r = number();
    const double g = number();
    const double b = number();
    return {r, g, b};
  }

  Material material() {
    Material m;
    m.diffuse = color();
    m.specular = color();
    m.shininess = number();
    m.reflectivity = number();
    return m;
  }

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
  std::vector<std::string_view> tokens_;
  std::size_t pos_ = 0;
};

void append_number(std::string& out, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

void append_vec(std::string& out, const Vec3& v) {
  append_number(out, v.x);
  out += ' ';
  append_number(out, v.y);
  out += ' ';
  append_number(out, v.z);
}

void append_color(std::string& out, const Color& c) {
  append_number(out, c.r);
  out += ' ';
  append_number(out, c.g);
  out += ' ';
  append_number(out, c.b);
}

}  // namespace

SceneDocument parse_scene(std::string_view text) {
  std::vector<TriangleMesh> objects;
  std::vector<PointLight> lights;
  Color ambient;
  Color background;
  Camera camera = default_camera();
  double eye_separation = kDefaultEyeSeparation;

  std::optional<TriangleMesh> open_object;
  std::size_t open_line = 0;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;

    LineReader in(line_no, std::move(tokens));
    const std::string_view record = in.word();

    if (record == "object") {
      const std::string_view action = in.word();
      if (action == "begin") {
        if (open_object) throw ParseError(line_no, "nested 'object begin'");
        in.expect_remaining(1, "object begin");
        open_object = TriangleMesh{};
        open_object->name = std::string(in.word());
        open_line = line_no;
      } else if (action == "end") {
        if (!open_object) throw ParseError(line_no, "'object end' without 'object begin'");
        in.expect_remaining(0, "object end");
        objects.push_back(std::move(*open_object));
        open_object.reset();
      } else {
        throw ParseError(line_no, "expected 'object begin' or 'object end'");
      }
    } else if (record == "v" || record == "f" || record == "material") {
      if (!open_object) throw ParseError(line_no, "'" + std::string(record) + "' outside an object block");
      if (record == "v") {
        in.expect_remaining(3, "v");
        open_object->vertices.push_back(in.vec3());
      } else if (record == "f") {
        if (in.remaining() < 3) throw ParseError(line_no, "a face needs at least 3 vertex indices");
        std::vector<std::uint32_t> poly;
        while (in.remaining() > 0) poly.push_back(in.index());
        for (std::size_t k = 1; k + 1 < poly.size(); ++k) open_object->faces.push_back({poly[0], poly[k], poly[k + 1]});
      } else {
        in.expect_remaining(8, "material");
        open_object->material = in.material();
      }
    } else if (open_object) {
      throw ParseError(line_no, "'" + std::string(record) + "' inside an object block");
    } else if (record == "camera") {
      if (in.remaining() != 10 && in.remaining() != 11)
        throw ParseError(line_no, "camera expects 10 or 11 values, got " + std::to_string(in.remaining()));
      camera.position = in.vec3();
      camera.look_at = in.vec3();
      camera.up = in.vec3();
      camera.vertical_fov = in.number();
      camera.aspect = in.remaining() > 0 ? in.number() : 1.0;
      validate_camera(camera);
    } else if (record == "stereo") {
      in.expect_remaining(1, "stereo");
      eye_separation = in.number();
      if (!(eye_separation > 0.0)) throw ValidationError("stereo", "eye separation must be > 0");
    } else if (record == "light") {
      in.expect_remaining(6, "light");
      PointLight light;
      light.position = in.vec3();
      light.intensity = in.color();
      lights.push_back(light);
    } else if (record == "ambient") {
      in.expect_remaining(3, "ambient");
      ambient = in.color();
    } else if (record == "background") {
      in.expect_remaining(3, "background");
      background = in.color();
    } else if (record == "builtin") {
      in.expect_remaining(13, "builtin");
      BuiltinKind kind;
      const std::string_view kind_name = in.word();
      if (!parse_builtin_kind(kind_name, kind))
        throw ParseError(line_no, "unknown builtin object '" + std::string(kind_name) + "'");
      const Vec3 center = in.vec3();
      const double scale = in.number();
      if (!(scale > 0.0)) throw ValidationError("line " + std::to_string(line_no), "builtin scale must be > 0");
      const Material material = in.material();
      objects.push_back(builtin_object(kind, center, scale, material));
    } else {
      throw ParseError(line_no, "unknown record '" + std::string(record) + "'");
    }
  }
  if (open_object) throw ParseError(open_line, "object '" + open_object->name + "' is missing 'object end'");

  SceneDocument doc;
  doc.scene = Scene(std::move(objects), std::move(lights), ambient, background);
  doc.camera = camera;
  doc.eye_separation = eye_separation;
  return doc;
}

SceneDocument load_scene_document(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw FileNotFound(path.string());
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_scene(buffer.str());
}

Scene load_scene(const std::filesystem::path& path) { return load_scene_document(path).scene; }

std::string serialize_scene(const SceneDocument& doc, std::string_view header_comment) {
  std::string out;
  std::size_t pos = 0;
  while (pos < header_comment.size()) {
    std::size_t end = header_comment.find('\n', pos);
    if (end == std::string_view::npos) end = header_comment.size();
    out += "# ";
    out += header_comment.substr(pos, end - pos);
    out += '\n';
    pos = end + 1;
  }

  const Camera& cam = doc.camera;
  out += "camera ";
  append_vec(out, cam.position);
  out += ' ';
  append_vec(out, cam.look_at);
  out += ' ';
  append_vec(out, cam.up);
  out += ' ';
  append_number(out, cam.vertical_fov);
  if (cam.aspect != 1.0) {
    out += ' ';
    append_number(out, cam.aspect);
  }
  out += "\nstereo ";
  append_number(out, doc.eye_separation);
  out += "\nambient ";
  append_color(out, doc.scene.ambient());
  out += "\nbackground ";
  append_color(out, doc.scene.background());
  out += '\n';

  for (const PointLight& light : doc.scene.lights()) {
    out += "light ";
    append_vec(out, light.position);
    out += ' ';
    append_color(out, light.intensity);
    out += '\n';
  }

  for (const TriangleMesh& mesh : doc.scene.objects()) {
    out += "object begin ";
    out += mesh.name;
    out += "\nmaterial ";
    append_color(out, mesh.material.diffuse);
    out += ' ';
    append_color(out, mesh.material.specular);
    out += ' ';
    append_number(out, mesh.material.shininess);
    out += ' ';
    append_number(out, mesh.material.reflectivity);
    out += '\n';
    for (const Vec3& v : mesh.vertices) {
      out += "v ";
      append_vec(out, v);
      out += '\n';
    }
    for (const Face& f : mesh.faces) {
      out += "f " + std::to_string(f[0]) + ' ' + std::to_string(f[1]) + ' ' + std::to_string(f[2]) + '\n';
    }
    out += "object end\n";
  }
  return out;
}

void save_scene(const std::filesystem::path& path, const SceneDocument& doc, std::string_view header_comment) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw WriteError(path.string());
  const std::string text = serialize_scene(doc, header_comment);
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!file) throw WriteError(path.string());
}

}  // namespace stereotrace
