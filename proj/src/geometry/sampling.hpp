// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "geometry/types.hpp"

namespace forge {

// Area-weighted triangle choice, uniform barycentric point inside it.
// Degenerate triangles are never chosen. Throws NoArea if all are degenerate.
PointCloud sample_surface(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed);

}  // namespace forge
