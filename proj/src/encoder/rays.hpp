// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "common/rng.hpp"
#include "geometry/bvh.hpp"
#include "geometry/sdf.hpp"
#include "neural/dense.hpp"

namespace forge {

// A supervision ray with its ground truth: albedo and T = 0 on a hit, black
// and T = 1 on a miss.
struct TrainingRay {
  Ray ray;
  Vec3 color = Vec3::Zero();
  double transmittance = 1.0;
};

inline constexpr double kCameraRadius = 3.0;

// Camera positions uniform on a sphere of radius kCameraRadius, each aimed at
// a uniform point of [-1, 1]^3; rays are clipped to `bounds`.
std::vector<TrainingRay> sample_training_rays(const TriangleBvh& bvh, const Vec3& albedo, std::size_t n, Rng& rng,
                                              const Aabb& bounds = default_grid_bounds());

struct SdfBatch {
  Mat points;  // 3 x M
  Vec truth;
};

// Half the points are surface samples offset by N(0, sigma^2 I), the rest are
// uniform in `bounds`; truths come from `sdf`.
SdfBatch sample_sdf_batch(const TriangleMesh& mesh, const SignedDistance& sdf, std::size_t n, Rng& rng,
                          double surface_sigma = 0.05, const Aabb& bounds = default_grid_bounds());

}  // namespace forge
