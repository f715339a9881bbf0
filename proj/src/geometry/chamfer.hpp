// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "geometry/types.hpp"

namespace forge {

// 0.5 * (mean_a min_b |a-b| + mean_b min_a |a-b|). Exact nearest neighbours.
double chamfer_distance(const PointCloud& a, const PointCloud& b);

}  // namespace forge
