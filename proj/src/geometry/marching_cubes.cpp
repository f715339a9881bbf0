// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "geometry/marching_cubes.hpp"

#include <unordered_map>

#include "geometry/mc_tables.hpp"

namespace forge {

namespace {

constexpr int kCorner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                               {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
constexpr int kEdge[12][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6},
                              {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};

}  // namespace

TriangleMesh extract_isosurface(const VoxelGrid& grid, double iso) {
  TriangleMesh mesh;
  const int n = grid.resolution;
  if (n < 2) return mesh;

  // key = 3 * lattice index of the lower endpoint + axis
  std::unordered_map<std::uint64_t, std::uint32_t> edge_vertex;
  const auto vertex_on_edge = [&](int i0, int j0, int k0, int i1, int j1, int k1) {
    if (i1 < i0 || j1 < j0 || k1 < k0) {
      std::swap(i0, i1);
      std::swap(j0, j1);
      std::swap(k0, k1);
    }
    const int axis = i1 != i0 ? 0 : (j1 != j0 ? 1 : 2);
    const std::uint64_t key = 3 * static_cast<std::uint64_t>(grid.index(i0, j0, k0)) + axis;
    auto [it, inserted] = edge_vertex.try_emplace(key, static_cast<std::uint32_t>(mesh.vertices.size()));
    if (inserted) {
      const double v0 = grid.at(i0, j0, k0), v1 = grid.at(i1, j1, k1);
      const Vec3 p0 = grid.position(i0, j0, k0), p1 = grid.position(i1, j1, k1);
      const double t = v1 != v0 ? (iso - v0) / (v1 - v0) : 0.5;
      mesh.vertices.push_back(p0 + t * (p1 - p0));
    }
    return it->second;
  };

  for (int k = 0; k + 1 < n; ++k)
    for (int j = 0; j + 1 < n; ++j)
      for (int i = 0; i + 1 < n; ++i) {
        int cube = 0;
        for (int c = 0; c < 8; ++c)
          if (grid.at(i + kCorner[c][0], j + kCorner[c][1], k + kCorner[c][2]) < iso) cube |= 1 << c;
        if (cube == 0 || cube == 255) continue;
        const auto& row = detail::kTriTable[cube];
        for (int e = 0; row[e] != -1; e += 3) {
          Triangle tri;
          for (int m = 0; m < 3; ++m) {
            const int* a = kCorner[kEdge[row[e + m]][0]];
            const int* b = kCorner[kEdge[row[e + m]][1]];
            tri[m] = vertex_on_edge(i + a[0], j + a[1], k + a[2], i + b[0], j + b[1], k + b[2]);
          }
          // The table winds triangles with normals toward the inside region.
          std::swap(tri[1], tri[2]);
          mesh.triangles.push_back(tri);
        }
      }
  return mesh;
}

}  // namespace forge
