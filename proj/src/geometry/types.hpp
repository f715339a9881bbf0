// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "mesh_io/mesh.hpp"

namespace forge {

struct Aabb {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = Vec3::Constant(-std::numeric_limits<double>::infinity());

  static Aabb cube(double half) { return {Vec3::Constant(-half), Vec3::Constant(half)}; }

  void expand(const Vec3& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  void expand(const Aabb& b) {
    lo = lo.cwiseMin(b.lo);
    hi = hi.cwiseMax(b.hi);
  }
  Vec3 extent() const { return hi - lo; }
  Vec3 center() const { return 0.5 * (lo + hi); }
  bool valid() const { return (hi.array() > lo.array()).all(); }
};

Aabb bounds_of(const TriangleMesh& mesh);

// Unit-direction ray restricted to [t_near, t_far].
struct Ray {
  Vec3 origin = Vec3::Zero();
  Vec3 direction = Vec3::UnitZ();
  double t_near = 0.0;
  double t_far = 1.0;

  Vec3 at(double t) const { return origin + t * direction; }
};

// Slab test; returns the clipped [t_near, t_far] if the ray overlaps the box.
std::optional<std::array<double, 2>> clip_to_box(const Vec3& origin, const Vec3& direction, const Aabb& box);

// Scalar samples on a regular lattice including both box corners, x fastest:
// index = i + n * (j + n * k), position = lo + (i, j, k) * spacing.
struct VoxelGrid {
  int resolution = 0;
  Aabb bounds;
  std::vector<double> values;

  VoxelGrid() = default;
  VoxelGrid(int n, const Aabb& box);

  double spacing() const { return bounds.extent().x() / (resolution - 1); }
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(resolution) *
                                             (static_cast<std::size_t>(j) + static_cast<std::size_t>(resolution) * k);
  }
  Vec3 position(int i, int j, int k) const;
  double at(int i, int j, int k) const { return values[index(i, j, k)]; }
};

struct PointCloud {
  std::vector<Vec3> points;
  std::optional<std::vector<Vec3>> colors;

  std::size_t size() const { return points.size(); }
};

struct Rgba {
  double r = 0, g = 0, b = 0, a = 0;
};

struct RgbaImage {
  int width = 0;
  int height = 0;
  std::vector<Rgba> pixels;  // row-major, top row first

  RgbaImage() = default;
  RgbaImage(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h) {}
  Rgba& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  const Rgba& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

}  // namespace forge
