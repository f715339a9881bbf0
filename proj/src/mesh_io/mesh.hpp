// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace forge {

using Vec3 = Eigen::Vector3d;

using Triangle = std::array<std::uint32_t, 3>;

// Indexed triangle mesh. STL input arrives as a soup (three fresh vertices per
// triangle); weld_vertices turns it into shared-vertex form.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  // One unit vector per triangle, or the zero vector for a degenerate one.
  std::optional<std::vector<Vec3>> normals;

  std::size_t triangle_count() const { return triangles.size(); }
  std::size_t vertex_count() const { return vertices.size(); }
  bool empty() const { return triangles.empty(); }

  const Vec3& corner(std::size_t tri, int k) const { return vertices[triangles[tri][k]]; }
};

// Normalized (b - a) x (c - a), or zero for a degenerate triangle.
Vec3 face_normal(const Vec3& a, const Vec3& b, const Vec3& c);
double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

std::vector<Vec3> compute_normals(const TriangleMesh& mesh);

struct MeshReport {
  std::size_t degenerate_triangles = 0;
  std::size_t boundary_edges = 0;      // edges used by exactly one triangle
  std::size_t nonmanifold_edges = 0;   // edges used by three or more triangles
  bool indices_valid = true;
  bool normals_valid = true;

  bool watertight() const { return boundary_edges == 0 && nonmanifold_edges == 0; }
};

// Structural checks; edges are counted on vertex indices, so weld first when
// the mesh is a triangle soup.
MeshReport validate(const TriangleMesh& mesh);

// Merges vertices closer than `tolerance` (exact bit equality when 0). Each
// vertex maps to the first earlier representative within tolerance, so the
// surviving representatives are pairwise farther apart than `tolerance` and a
// second pass is a no-op. Triangle count and order are unchanged.
TriangleMesh weld_vertices(const TriangleMesh& mesh, double tolerance = 0.0);

}  // namespace forge
