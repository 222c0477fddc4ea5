// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0

#include "stereotrace/accel.hpp"

#include <algorithm>
#include <cmath>

#include "stereotrace/errors.hpp"
#include "stereotrace/triangle.hpp"

namespace stereotrace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void flatten(const Scene& scene, simd::TriangleArrays& tris, std::vector<std::uint32_t>& tri_object,
             std::vector<std::uint32_t>& tri_face) {
  for (std::size_t o = 0; o < scene.objects().size(); ++o) {
    const TriangleMesh& mesh = scene.objects()[o];
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
      const Face& face = mesh.faces[f];
      tris.push_back(mesh.vertices[face[0]], mesh.vertices[face[1]], mesh.vertices[face[2]]);
      tri_object.push_back(static_cast<std::uint32_t>(o));
      tri_face.push_back(static_cast<std::uint32_t>(f));
    }
  }
}

struct BuildItem {
  Aabb bounds;
  Vec3 centroid;
};

class BvhBuilder {
 public:
  BvhBuilder(const std::vector<BuildItem>& items, int leaf_max, std::vector<BvhNode>& nodes,
             std::vector<std::uint32_t>& refs)
      : items_(items), leaf_max_(static_cast<std::uint32_t>(leaf_max)), nodes_(nodes), refs_(refs) {}

  std::uint32_t build(std::uint32_t first, std::uint32_t count) {
    const auto index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();

    Aabb bounds;
    Aabb centroids;
    for (std::uint32_t i = first; i < first + count; ++i) {
      bounds.expand(items_[refs_[i]].bounds);
      centroids.expand(items_[refs_[i]].centroid);
    }

    if (count <= leaf_max_) {
      BvhNode& leaf = nodes_[index];
      leaf.bounds = bounds;
      leaf.first = first;
      leaf.count = count;
      return index;
    }

    // Median split on the longest centroid axis; equal centroids fall back to
    // reference order so the build is deterministic.
    const int axis = centroids.longest_axis();
    const std::uint32_t half = count / 2;
    auto begin = refs_.begin() + first;
    std::nth_element(begin, begin + half, begin + count, [&](std::uint32_t a, std::uint32_t b) {
      const double ca = items_[a].centroid[axis];
      const double cb = items_[b].centroid[axis];
      return ca < cb || (ca == cb && a < b);
    });

    const std::uint32_t left = build(first, half);
    const std::uint32_t right = build(first + half, count - half);
    BvhNode& node = nodes_[index];
    node.bounds = bounds;
    node.left = left;
    node.right = right;
    node.axis = static_cast<std::uint8_t>(axis);
    return index;
  }

 private:
  const std::vector<BuildItem>& items_;
  std::uint32_t leaf_max_;
  std::vector<BvhNode>& nodes_;
  std::vector<std::uint32_t>& refs_;
};

Hit make_hit(const AccelHandle& accel, const Ray& ray, double t, std::uint32_t tri) {
  const simd::TriangleArrays& tris = accel.triangles();
  const Vec3 v0 = tris.v0(tri);
  Vec3 n = normalize(cross(tris.v1(tri) - v0, tris.v2(tri) - v0));
  if (dot(n, ray.direction) > 0.0) n = -n;
  Hit hit;
  hit.t = t;
  hit.point = ray.at(t);
  hit.normal = n;
  hit.object_index = accel.object_of(tri);
  hit.face_index = accel.face_of(tri);
  return hit;
}

// Widened interval bounds; pruning with these is conservative against the
// rounding difference between the slab test and the triangle solve.
inline double pad_up(double t) { return std::isfinite(t) ? t + std::abs(t) * 1e-9 + 1e-12 : t; }

void traverse_bvh(const AccelHandle& accel, const Ray& ray, double t_min, simd::NearestCandidate& best,
                  QueryStats& stats) {
  const auto nodes = accel.nodes();
  if (nodes.empty()) return;
  const auto refs = accel.references();
  const simd::TriangleArrays& tris = accel.triangles();
  const Vec3 inv{1.0 / ray.direction.x, 1.0 / ray.direction.y, 1.0 / ray.direction.z};
  const bool negative[3] = {ray.direction.x < 0.0, ray.direction.y < 0.0, ray.direction.z < 0.0};

  std::uint32_t stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const BvhNode& node = nodes[stack[--top]];
    ++stats.nodes_visited;
    const auto span = slab_interval(node.bounds, ray.origin, inv);
    if (!span) continue;
    if (pad_up(span->second) < t_min || span->first > pad_up(best.t)) continue;

    if (node.is_leaf()) {
      for (std::uint32_t k = node.first; k < node.first + node.count; ++k) {
        const std::uint32_t tri = refs[k];
        ++stats.triangle_tests;
        const auto hit = intersect_triangle(ray, tris.v0(tri), tris.v1(tri), tris.v2(tri), t_min);
        if (hit && hit->t <= best.t) best.offer(hit->t, tri);
      }
      continue;
    }
    // Near child on top of the stack.
    if (negative[node.axis]) {
      stack[top++] = node.left;
      stack[top++] = node.right;
    } else {
      stack[top++] = node.right;
      stack[top++] = node.left;
    }
  }
}

}  // namespace

int Aabb::longest_axis() const {
  const Vec3 e = max - min;
  if (e.x >= e.y && e.x >= e.z) return 0;
  return e.y >= e.z ? 1 : 2;
}

std::optional<std::pair<double, double>> slab_interval(const Aabb& box, const Vec3& origin, const Vec3& inv_dir) {
  double entry = -kInf;
  double exit = kInf;
  for (int axis = 0; axis < 3; ++axis) {
    const double t0 = (box.min[axis] - origin[axis]) * inv_dir[axis];
    const double t1 = (box.max[axis] - origin[axis]) * inv_dir[axis];
    // 0 * inf: the ray runs inside a slab boundary plane; that axis does not
    // constrain the interval.
    if (std::isnan(t0) || std::isnan(t1)) continue;
    entry = std::max(entry, std::min(t0, t1));
    exit = std::min(exit, std::max(t0, t1));
  }
  if (entry > pad_up(exit)) return std::nullopt;
  return std::pair{entry, exit};
}

std::string_view to_string(AccelMode mode) { return mode == AccelMode::Linear ? "linear" : "bvh"; }

bool parse_accel_mode(std::string_view text, AccelMode& out) {
  if (text == "linear") {
    out = AccelMode::Linear;
    return true;
  }
  if (text == "bvh") {
    out = AccelMode::Bvh;
    return true;
  }
  return false;
}

AccelHandle build_linear(const Scene& scene) {
  AccelHandle h;
  h.mode_ = AccelMode::Linear;
  h.revision_ = scene.revision();
  flatten(scene, h.triangles_, h.tri_object_, h.tri_face_);
  return h;
}

AccelHandle build_bvh(const Scene& scene, int leaf_max) {
  AccelHandle h;
  h.mode_ = AccelMode::Bvh;
  h.revision_ = scene.revision();
  h.leaf_max_ = std::max(1, leaf_max);
  flatten(scene, h.triangles_, h.tri_object_, h.tri_face_);

  const std::size_t n = h.triangles_.size();
  if (n == 0) return h;

  std::vector<BuildItem> items(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 a = h.triangles_.v0(i);
    const Vec3 b = h.triangles_.v1(i);
    const Vec3 c = h.triangles_.v2(i);
    items[i].bounds.expand(a);
    items[i].bounds.expand(b);
    items[i].bounds.expand(c);
    items[i].centroid = (a + b + c) * (1.0 / 3.0);
  }
  h.references_.resize(n);
  for (std::size_t i = 0; i < n; ++i) h.references_[i] = static_cast<std::uint32_t>(i);
  h.nodes_.reserve(2 * n);
  BvhBuilder(items, h.leaf_max_, h.nodes_, h.references_).build(0, static_cast<std::uint32_t>(n));
  return h;
}

AccelHandle build_accel(const Scene& scene, AccelMode mode) {
  return mode == AccelMode::Linear ? build_linear(scene) : build_bvh(scene, kDefaultLeafMax);
}

std::optional<Hit> query_nearest(const AccelHandle& accel, const Scene& scene, const Ray& ray, double t_min,
                                 const QueryOptions& options) {
  if (accel.revision() != scene.revision()) throw AccelMismatch();

  QueryStats local;
  QueryStats& stats = options.stats ? *options.stats : local;
  simd::NearestCandidate best;
  best.t = options.t_max;

  if (accel.mode() == AccelMode::Linear) {
    const simd::KernelTable& k = options.kernels ? *options.kernels : simd::active_kernels();
    stats.triangle_tests += accel.triangle_count();
    k.intersect_range(accel.triangles(), 0, accel.triangle_count(), ray, t_min, best);
  } else {
    traverse_bvh(accel, ray, t_min, best, stats);
  }

  if (!best.found()) return std::nullopt;
  return make_hit(accel, ray, best.t, best.index);
}

}  // namespace stereotrace
