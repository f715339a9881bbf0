// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "geometry/types.hpp"

namespace forge {

// normalized = (p - center) * scale
struct NormalizeTransform {
  Vec3 center = Vec3::Zero();
  double scale = 1.0;

  Vec3 apply(const Vec3& p) const { return (p - center) * scale; }
  Vec3 invert(const Vec3& q) const { return q / scale + center; }
};

struct NormalizedMesh {
  TriangleMesh mesh;
  NormalizeTransform transform;
};

// Centers the bounding box at the origin and scales the largest extent to 2.
NormalizedMesh normalize_mesh(const TriangleMesh& mesh);

TriangleMesh apply_transform(const TriangleMesh& mesh, const NormalizeTransform& t);

}  // namespace forge
