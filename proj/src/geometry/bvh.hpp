// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "geometry/types.hpp"

namespace forge {

// Closest point on triangle abc to p (Ericson, Real-Time Collision Detection 5.1.5).
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

// Bounding volume hierarchy over a mesh's triangles. Queries are exact; the
// tree only prunes. Immutable after construction, so concurrent queries are safe.
class TriangleBvh {
 public:
  explicit TriangleBvh(const TriangleMesh& mesh);

  struct Closest {
    double distance_sq = std::numeric_limits<double>::infinity();
    std::size_t triangle = 0;
    Vec3 point = Vec3::Zero();
  };
  Closest closest(const Vec3& p) const;

  struct Hit {
    double t = 0.0;
    std::size_t triangle = 0;
  };
  // Nearest intersection with t in [ray.t_near, ray.t_far].
  std::optional<Hit> first_hit(const Ray& ray) const;

  struct Crossings {
    int count = 0;
    // A hit landed within epsilon of an edge, a vertex, the ray origin, or the
    // ray was nearly parallel to a hit triangle.
    bool ambiguous = false;
  };
  Crossings count_crossings(const Vec3& origin, const Vec3& direction) const;

  std::size_t triangle_count() const { return tris_.size(); }
  const Vec3& normal(std::size_t triangle) const { return tris_[triangle].normal; }
  bool empty() const { return tris_.empty(); }

 private:
  struct Tri {
    Vec3 a, b, c, normal;
  };
  struct Node {
    Aabb box;
    std::uint32_t first = 0;  // leaf: first index into order_; inner: left child
    std::uint32_t count = 0;  // leaf: triangle count; inner: 0
    std::uint32_t right = 0;
  };

  std::uint32_t build(std::uint32_t first, std::uint32_t count, std::vector<Vec3>& centroids);

  std::vector<Tri> tris_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace forge
