// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "stereotrace/kernels.hpp"
#include "stereotrace/ray.hpp"
#include "stereotrace/scene.hpp"

namespace stereotrace {

struct Aabb {
  Vec3 min{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity()};
  Vec3 max{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity()};

  void expand(const Vec3& p) {
    min = stereotrace::min(min, p);
    max = stereotrace::max(max, p);
  }
  void expand(const Aabb& b) {
    min = stereotrace::min(min, b.min);
    max = stereotrace::max(max, b.max);
  }
  bool empty() const { return min.x > max.x || min.y > max.y || min.z > max.z; }
  int longest_axis() const;

  friend bool operator==(const Aabb&, const Aabb&) = default;
};

/// Slab test. Returns the parametric [entry, exit] interval of the ray inside
/// the box, or nullopt if it misses. `inv_dir` is 1 / direction per axis.
std::optional<std::pair<double, double>> slab_interval(const Aabb& box, const Vec3& origin, const Vec3& inv_dir);

struct BvhNode {
  Aabb bounds;
  std::uint32_t left = 0;   // interior: child node indices
  std::uint32_t right = 0;
  std::uint32_t first = 0;  // leaf: slice [first, first + count) of the reference list
  std::uint32_t count = 0;
  std::uint8_t axis = 0;    // split axis, used to order traversal

  bool is_leaf() const { return count > 0; }
};

enum class AccelMode { Linear, Bvh };

std::string_view to_string(AccelMode mode);
bool parse_accel_mode(std::string_view text, AccelMode& out);

inline constexpr int kDefaultLeafMax = 4;

struct QueryStats {
  std::uint64_t nodes_visited = 0;
  std::uint64_t triangle_tests = 0;

  QueryStats& operator+=(const QueryStats& o) {
    nodes_visited += o.nodes_visited;
    triangle_tests += o.triangle_tests;
    return *this;
  }
};

/// Immutable nearest-hit structure for one scene revision. Holds its own
/// flattened copy of the triangles, so it stays valid independent of the
/// Scene object it was built from.
class AccelHandle {
 public:
  AccelMode mode() const { return mode_; }
  std::uint64_t revision() const { return revision_; }
  int leaf_max() const { return leaf_max_; }
  std::size_t triangle_count() const { return triangles_.size(); }

  const simd::TriangleArrays& triangles() const { return triangles_; }
  std::span<const BvhNode> nodes() const { return nodes_; }
  std::span<const std::uint32_t> references() const { return references_; }
  std::size_t object_of(std::size_t triangle) const { return tri_object_[triangle]; }
  std::size_t face_of(std::size_t triangle) const { return tri_face_[triangle]; }

  friend AccelHandle build_linear(const Scene& scene);
  friend AccelHandle build_bvh(const Scene& scene, int leaf_max);

 private:
  AccelMode mode_ = AccelMode::Linear;
  std::uint64_t revision_ = 0;
  int leaf_max_ = 0;
  simd::TriangleArrays triangles_;
  std::vector<std::uint32_t> tri_object_;
  std::vector<std::uint32_t> tri_face_;
  std::vector<BvhNode> nodes_;
  std::vector<std::uint32_t> references_;
};

AccelHandle build_linear(const Scene& scene);
AccelHandle build_bvh(const Scene& scene, int leaf_max = kDefaultLeafMax);
AccelHandle build_accel(const Scene& scene, AccelMode mode);

struct QueryOptions {
  double t_max = std::numeric_limits<double>::infinity();  // hits must satisfy t <= t_max
  QueryStats* stats = nullptr;
  const simd::KernelTable* kernels = nullptr;              // linear mode; nullptr = active_kernels()
};

/// Nearest hit with t > t_min. Equal t resolves to the smallest
/// (object_index, face_index). Throws AccelMismatch if `accel` was built
/// for a different scene revision.
std::optional<Hit> query_nearest(const AccelHandle& accel, const Scene& scene, const Ray& ray, double t_min,
                                 const QueryOptions& options = {});

}  // namespace stereotrace
