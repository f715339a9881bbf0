// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "encoder/rays.hpp"

#include <cmath>
#include <numbers>

#include "geometry/sampling.hpp"

namespace forge {

namespace {

Vec3 uniform_on_sphere(Rng& rng) {
  const double z = rng.uniform(-1.0, 1.0);
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

}  // namespace

std::vector<TrainingRay> sample_training_rays(const TriangleBvh& bvh, const Vec3& albedo, std::size_t n, Rng& rng,
                                              const Aabb& bounds) {
  std::vector<TrainingRay> rays;
  rays.reserve(n);
  while (rays.size() < n) {
    const Vec3 origin = kCameraRadius * uniform_on_sphere(rng);
    const Vec3 target(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    const Vec3 dir = (target - origin).normalized();
    const auto span = clip_to_box(origin, dir, bounds);
    if (!span) continue;
    TrainingRay tr;
    tr.ray.origin = origin;
    tr.ray.direction = dir;
    tr.ray.t_near = (*span)[0];
    tr.ray.t_far = (*span)[1];
    if (bvh.first_hit(tr.ray)) {
      tr.color = albedo;
      tr.transmittance = 0.0;
    }
    rays.push_back(tr);
  }
  return rays;
}

SdfBatch sample_sdf_batch(const TriangleMesh& mesh, const SignedDistance& sdf, std::size_t n, Rng& rng,
                          double surface_sigma, const Aabb& bounds) {
  SdfBatch batch;
  batch.points.resize(3, static_cast<Eigen::Index>(n));
  batch.truth.resize(static_cast<Eigen::Index>(n));
  const std::size_t near = n / 2;
  const PointCloud surf = sample_surface(mesh, near, rng.next_u64());
  for (std::size_t i = 0; i < n; ++i) {
    Vec3 p;
    if (i < near) {
      p = surf.points[i] + surface_sigma * Vec3(rng.normal(), rng.normal(), rng.normal());
    } else {
      for (int a = 0; a < 3; ++a) p[a] = rng.uniform(bounds.lo[a], bounds.hi[a]);
    }
    batch.points.col(static_cast<Eigen::Index>(i)) = p;
    batch.truth[static_cast<Eigen::Index>(i)] = sdf(p);
  }
  return batch;
}

}  // namespace forge
