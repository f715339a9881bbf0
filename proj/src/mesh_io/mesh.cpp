// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "mesh_io/mesh.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <unordered_map>
#include <utility>

#include "common/error.hpp"
#include "common/hash.hpp"

namespace forge {

Vec3 face_normal(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 n = (b - a).cross(c - a);
  const double len = n.norm();
  if (!(len > 0.0) || !std::isfinite(len)) return Vec3::Zero();
  return n / len;
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

std::vector<Vec3> compute_normals(const TriangleMesh& mesh) {
  std::vector<Vec3> normals;
  normals.reserve(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
    normals.push_back(face_normal(mesh.corner(t, 0), mesh.corner(t, 1), mesh.corner(t, 2)));
  return normals;
}

MeshReport validate(const TriangleMesh& mesh) {
  MeshReport r;
  const auto nv = mesh.vertices.size();
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> edge_use;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    if (tri[0] >= nv || tri[1] >= nv || tri[2] >= nv) {
      r.indices_valid = false;
      continue;
    }
    if (triangle_area(mesh.corner(t, 0), mesh.corner(t, 1), mesh.corner(t, 2)) <= 0.0)
      ++r.degenerate_triangles;
    for (int k = 0; k < 3; ++k) {
      auto a = tri[k], b = tri[(k + 1) % 3];
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      ++edge_use[{a, b}];
    }
  }
  for (const auto& [edge, count] : edge_use) {
    if (count == 1) ++r.boundary_edges;
    if (count > 2) ++r.nonmanifold_edges;
  }
  if (mesh.normals) {
    if (mesh.normals->size() != mesh.triangles.size()) {
      r.normals_valid = false;
    } else {
      for (const auto& n : *mesh.normals) {
        const double len = n.norm();
        if (len != 0.0 && std::abs(len - 1.0) > 1e-4) r.normals_valid = false;
      }
    }
  }
  return r;
}

namespace {

struct KeyHash {
  std::size_t operator()(const std::array<std::uint64_t, 3>& k) const {
    std::uint64_t h = kFnvOffset;
    for (auto v : k) h = (h ^ v) * kFnvPrime ^ (v >> 29);
    return static_cast<std::size_t>(h);
  }
};

struct CellHash {
  std::size_t operator()(const std::array<long long, 3>& k) const {
    std::uint64_t h = kFnvOffset;
    for (auto v : k) h = (h ^ static_cast<std::uint64_t>(v)) * kFnvPrime;
    return static_cast<std::size_t>(h);
  }
};

std::uint64_t exact_bits(double v) {
  if (v == 0.0) v = 0.0;  // fold -0 into +0
  return std::bit_cast<std::uint64_t>(v);
}

}  // namespace

TriangleMesh weld_vertices(const TriangleMesh& mesh, double tolerance) {
  if (!(tolerance >= 0.0)) fail(Errc::InvalidArgument, "weld tolerance must be >= 0");
  TriangleMesh out;
  out.normals = mesh.normals;
  std::vector<std::uint32_t> remap(mesh.vertices.size());

  if (tolerance == 0.0) {
    std::unordered_map<std::array<std::uint64_t, 3>, std::uint32_t, KeyHash> seen;
    seen.reserve(mesh.vertices.size());
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
      const auto& v = mesh.vertices[i];
      const std::array<std::uint64_t, 3> key{exact_bits(v.x()), exact_bits(v.y()), exact_bits(v.z())};
      auto [it, inserted] = seen.try_emplace(key, static_cast<std::uint32_t>(out.vertices.size()));
      if (inserted) out.vertices.push_back(v);
      remap[i] = it->second;
    }
  } else {
    std::unordered_map<std::array<long long, 3>, std::vector<std::uint32_t>, CellHash> grid;
    const auto cell_of = [&](const Vec3& v) {
      return std::array<long long, 3>{static_cast<long long>(std::floor(v.x() / tolerance)),
                                      static_cast<long long>(std::floor(v.y() / tolerance)),
                                      static_cast<long long>(std::floor(v.z() / tolerance))};
    };
    const double tol2 = tolerance * tolerance;
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
      const auto& v = mesh.vertices[i];
      const auto c = cell_of(v);
      std::uint32_t found = UINT32_MAX;
      for (long long dx = -1; dx <= 1; ++dx)
        for (long long dy = -1; dy <= 1; ++dy)
          for (long long dz = -1; dz <= 1; ++dz) {
            auto it = grid.find({c[0] + dx, c[1] + dy, c[2] + dz});
            if (it == grid.end()) continue;
            for (auto rep : it->second) {
              if ((out.vertices[rep] - v).squaredNorm() <= tol2) {
                // earliest representative wins
                if (rep < found) found = rep;
              }
            }
          }
      if (found == UINT32_MAX) {
        found = static_cast<std::uint32_t>(out.vertices.size());
        out.vertices.push_back(v);
        grid[c].push_back(found);
      }
      remap[i] = found;
    }
  }

  out.triangles.reserve(mesh.triangles.size());
  for (const auto& tri : mesh.triangles) {
    Triangle t;
    for (int k = 0; k < 3; ++k) {
      if (tri[k] >= remap.size()) fail(Errc::IndexOutOfRange, "triangle references missing vertex");
      t[k] = remap[tri[k]];
    }
    out.triangles.push_back(t);
  }
  return out;
}

}  // namespace forge
