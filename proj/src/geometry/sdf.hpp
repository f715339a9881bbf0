// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "geometry/bvh.hpp"
#include "geometry/types.hpp"

namespace forge {

// Signed distance to a triangle mesh: exact unsigned distance, negative inside.
// Inside/outside comes from ray-crossing parity; a ray that grazes an edge or
// vertex is retried along up to 8 jittered directions, after which the
// majority vote of the unambiguous attempts (or the last attempt) wins.
class SignedDistance {
 public:
  explicit SignedDistance(const TriangleMesh& mesh) : bvh_(mesh) {}

  double operator()(const Vec3& p) const;
  double unsigned_distance(const Vec3& p) const;
  bool inside(const Vec3& p) const;

  const TriangleBvh& bvh() const { return bvh_; }

 private:
  TriangleBvh bvh_;
};

double signed_distance(const TriangleMesh& mesh, const Vec3& p);

inline Aabb default_grid_bounds() { return Aabb::cube(1.1); }

VoxelGrid sdf_grid(const TriangleMesh& mesh, int resolution, const Aabb& bounds = default_grid_bounds());

}  // namespace forge
