// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "mesh_io/mesh.hpp"

namespace forge {

// Welded, outward-oriented closed meshes.

// Axis-aligned cube [lo, hi]^3: 8 vertices, 12 triangles.
TriangleMesh make_cube(double lo = 0.0, double hi = 1.0);

// Icosahedron refined by midpoint subdivision and projected to the sphere.
// subdivisions = 3 gives 642 vertices and 1280 triangles.
TriangleMesh make_icosphere(int subdivisions, double radius = 1.0, const Vec3& center = Vec3::Zero());

// Ring torus around the z axis.
TriangleMesh make_torus(double major_radius, double minor_radius, int major_segments = 48, int minor_segments = 24);

// Every triangle gets three fresh vertices, like an STL file.
TriangleMesh to_soup(const TriangleMesh& mesh);

}  // namespace forge
