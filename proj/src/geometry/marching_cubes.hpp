// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "geometry/types.hpp"

namespace forge {

// Marching cubes over the full lattice with the 256-case table (no ambiguity
// resolution). A lattice value strictly below `iso` counts as inside. Shared
// edge vertices are emitted once, so closed level sets give welded, watertight
// meshes. Triangles wind counter-clockwise seen from the outside (normals point
// toward increasing field values).
TriangleMesh extract_isosurface(const VoxelGrid& grid, double iso = 0.0);

}  // namespace forge
