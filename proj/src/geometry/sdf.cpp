// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "geometry/sdf.hpp"

#include <array>
#include <cmath>

#include "common/error.hpp"

namespace forge {

namespace {

constexpr int kDirections = 8;

// Fixed, irrational-looking directions so that axis-aligned meshes are not
// hit along edges by the first attempt.
const std::array<Vec3, kDirections>& probe_directions() {
  static const std::array<Vec3, kDirections> dirs = [] {
    const double raw[kDirections][3] = {
        {0.5773502691896258, 0.6172133998483676, 0.5345224838248488},
        {-0.3826834323650898, 0.7071067811865476, 0.5946035575013605},
        {0.7236067977499790, -0.5257311121191336, 0.4472135954999579},
        {-0.6154122094026357, -0.3555121234617049, 0.7035314922829713},
        {0.2672612419124244, 0.5345224838248488, -0.8017837257372732},
        {-0.8164965809277261, 0.1690308509457033, -0.5521576310034193},
        {0.4082482904638631, -0.8340577336464639, -0.3713906763541037},
        {-0.1601281538050871, -0.4803844614152614, -0.8623164985025763},
    };
    std::array<Vec3, kDirections> out;
    for (int i = 0; i < kDirections; ++i) out[i] = Vec3(raw[i][0], raw[i][1], raw[i][2]).normalized();
    return out;
  }();
  return dirs;
}

}  // namespace

double SignedDistance::unsigned_distance(const Vec3& p) const {
  if (bvh_.empty()) return std::numeric_limits<double>::infinity();
  return std::sqrt(bvh_.closest(p).distance_sq);
}

bool SignedDistance::inside(const Vec3& p) const {
  int votes_in = 0, votes_out = 0;
  bool last = false;
  for (const auto& dir : probe_directions()) {
    const auto c = bvh_.count_crossings(p, dir);
    last = (c.count % 2) == 1;
    if (!c.ambiguous) return last;
    (last ? votes_in : votes_out) += 1;
  }
  if (votes_in != votes_out) return votes_in > votes_out;
  return last;
}

double SignedDistance::operator()(const Vec3& p) const {
  const double d = unsigned_distance(p);
  if (d == 0.0 || bvh_.empty()) return d;
  return inside(p) ? -d : d;
}

double signed_distance(const TriangleMesh& mesh, const Vec3& p) { return SignedDistance(mesh)(p); }

VoxelGrid sdf_grid(const TriangleMesh& mesh, int resolution, const Aabb& bounds) {
  if (resolution < 2) fail(Errc::InvalidArgument, "sdf grid resolution must be >= 2");
  if (!bounds.valid()) fail(Errc::InvalidArgument, "sdf grid bounds are degenerate");
  VoxelGrid grid(resolution, bounds);
  const SignedDistance sdf(mesh);
  for (int k = 0; k < resolution; ++k)
    for (int j = 0; j < resolution; ++j)
      for (int i = 0; i < resolution; ++i) grid.values[grid.index(i, j, k)] = sdf(grid.position(i, j, k));
  return grid;
}

}  // namespace forge
