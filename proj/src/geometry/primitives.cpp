// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "geometry/primitives.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "common/error.hpp"

namespace forge {

TriangleMesh make_cube(double lo, double hi) {
  TriangleMesh m;
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i) m.vertices.emplace_back(i ? hi : lo, j ? hi : lo, k ? hi : lo);
  // vertex id = i + 2j + 4k
  const std::uint32_t quads[6][4] = {
      {0, 2, 3, 1},  // z = lo
      {4, 5, 7, 6},  // z = hi
      {0, 1, 5, 4},  // y = lo
      {2, 6, 7, 3},  // y = hi
      {0, 4, 6, 2},  // x = lo
      {1, 3, 7, 5},  // x = hi
  };
  for (const auto& q : quads) {
    m.triangles.push_back({q[0], q[1], q[2]});
    m.triangles.push_back({q[0], q[2], q[3]});
  }
  return m;
}

TriangleMesh make_icosphere(int subdivisions, double radius, const Vec3& center) {
  if (subdivisions < 0) fail(Errc::InvalidArgument, "subdivisions must be >= 0");
  const double p = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, p, 0}, {1, p, 0}, {-1, -p, 0}, {1, -p, 0}, {0, -1, p}, {0, 1, p},
                         {0, -1, -p}, {0, 1, -p}, {p, 0, -1}, {p, 0, 1}, {-p, 0, -1}, {-p, 0, 1}};
  for (auto& x : v) x.normalize();
  std::vector<Triangle> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                             {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                             {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> mid;
    const auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      const auto id = static_cast<std::uint32_t>(v.size());
      v.push_back((v[a] + v[b]).normalized());
      mid.emplace(key, id);
      return id;
    };
    std::vector<Triangle> next;
    next.reserve(f.size() * 4);
    for (const auto& t : f) {
      const auto a = midpoint(t[0], t[1]);
      const auto b = midpoint(t[1], t[2]);
      const auto c = midpoint(t[2], t[0]);
      next.push_back({t[0], a, c});
      next.push_back({t[1], b, a});
      next.push_back({t[2], c, b});
      next.push_back({a, b, c});
    }
    f = std::move(next);
  }
  TriangleMesh m;
  m.vertices.reserve(v.size());
  for (const auto& x : v) m.vertices.push_back(center + radius * x);
  m.triangles = std::move(f);
  return m;
}

TriangleMesh make_torus(double major_radius, double minor_radius, int major_segments, int minor_segments) {
  if (major_segments < 3 || minor_segments < 3) fail(Errc::InvalidArgument, "torus needs >= 3 segments");
  TriangleMesh m;
  const auto nu = static_cast<std::uint32_t>(major_segments);
  const auto nv = static_cast<std::uint32_t>(minor_segments);
  for (std::uint32_t i = 0; i < nu; ++i) {
    const double u = 2.0 * std::numbers::pi * i / nu;
    for (std::uint32_t j = 0; j < nv; ++j) {
      const double w = 2.0 * std::numbers::pi * j / nv;
      const double ring = major_radius + minor_radius * std::cos(w);
      m.vertices.emplace_back(ring * std::cos(u), ring * std::sin(u), minor_radius * std::sin(w));
    }
  }
  const auto id = [&](std::uint32_t i, std::uint32_t j) { return (i % nu) * nv + (j % nv); };
  for (std::uint32_t i = 0; i < nu; ++i)
    for (std::uint32_t j = 0; j < nv; ++j) {
      const auto a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      m.triangles.push_back({a, b, c});
      m.triangles.push_back({a, c, d});
    }
  return m;
}

TriangleMesh to_soup(const TriangleMesh& mesh) {
  TriangleMesh out;
  out.normals = mesh.normals;
  out.vertices.reserve(mesh.triangles.size() * 3);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto base = static_cast<std::uint32_t>(out.vertices.size());
    for (int k = 0; k < 3; ++k) out.vertices.push_back(mesh.corner(t, k));
    out.triangles.push_back({base, base + 1, base + 2});
  }
  return out;
}

}  // namespace forge
