// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "geometry/transform.hpp"

#include <cmath>

#include "common/error.hpp"

namespace forge {

Aabb bounds_of(const TriangleMesh& mesh) {
  Aabb box;
  for (const auto& tri : mesh.triangles)
    for (auto idx : tri) box.expand(mesh.vertices[idx]);
  return box;
}

std::optional<std::array<double, 2>> clip_to_box(const Vec3& origin, const Vec3& direction, const Aabb& box) {
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (direction[a] == 0.0) {
      if (origin[a] < box.lo[a] || origin[a] > box.hi[a]) return std::nullopt;
      continue;
    }
    const double inv = 1.0 / direction[a];
    double ta = (box.lo[a] - origin[a]) * inv;
    double tb = (box.hi[a] - origin[a]) * inv;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  t0 = std::max(t0, 0.0);
  if (!(t1 > t0)) return std::nullopt;
  return std::array<double, 2>{t0, t1};
}

VoxelGrid::VoxelGrid(int n, const Aabb& box)
    : resolution(n), bounds(box), values(static_cast<std::size_t>(n) * n * n, 0.0) {
  if (n < 2) fail(Errc::InvalidArgument, "grid resolution must be >= 2");
  if (!box.valid()) fail(Errc::InvalidArgument, "grid bounds are degenerate");
}

Vec3 VoxelGrid::position(int i, int j, int k) const {
  const Vec3 step = bounds.extent() / static_cast<double>(resolution - 1);
  // Endpoints are pinned so the last lattice point equals bounds.hi exactly.
  const auto coord = [&](int axis, int idx) {
    if (idx == resolution - 1) return bounds.hi[axis];
    return bounds.lo[axis] + idx * step[axis];
  };
  return {coord(0, i), coord(1, j), coord(2, k)};
}

NormalizedMesh normalize_mesh(const TriangleMesh& mesh) {
  if (mesh.empty()) fail(Errc::EmptyMesh, "cannot normalize an empty mesh");
  const Aabb box = bounds_of(mesh);
  const double largest = box.extent().maxCoeff();
  if (!(largest > 0.0)) fail(Errc::ZeroExtent, "mesh has zero extent (all vertices coincide)");
  NormalizeTransform t{box.center(), 2.0 / largest};
  return {apply_transform(mesh, t), t};
}

TriangleMesh apply_transform(const TriangleMesh& mesh, const NormalizeTransform& t) {
  TriangleMesh out = mesh;
  for (auto& v : out.vertices) v = t.apply(v);
  return out;
}

}  // namespace forge
