// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "geometry/bvh.hpp"
#include "geometry/types.hpp"

namespace forge {

struct RaySample {
  double sigma = 0.0;  // density, >= 0
  Vec3 rgb = Vec3::Zero();
  double delta = 0.0;  // segment length, > 0
};

struct Composite {
  Vec3 color = Vec3::Zero();
  double transmittance = 1.0;  // exp(-sum sigma * delta)
  std::vector<double> weights;  // w_i = T_i (1 - exp(-sigma_i delta_i))
};

// Front-to-back emission-absorption compositing.
Composite composite_ray(std::span<const RaySample> samples);

// Reverse pass of composite_ray: given dL/dC and dL/dT, writes dL/dsigma_i and
// dL/drgb_i. `forward` must come from the same samples.
void composite_ray_backward(std::span<const RaySample> samples, const Composite& forward, const Vec3& grad_color,
                            double grad_transmittance, std::span<double> grad_sigma, std::span<Vec3> grad_rgb);

// Pinhole camera; square images, vertical field of view in degrees.
struct Camera {
  Vec3 position = Vec3(0, 0, 3);
  Vec3 target = Vec3::Zero();
  Vec3 up = Vec3::UnitY();
  double vfov_deg = 40.0;

  // Unit-direction ray through the center of pixel (x, y) of an s-by-s image.
  Ray pixel_ray(int x, int y, int s) const;
};

// Camera on a sphere of `radius` around the origin, looking at the origin.
Camera orbit_camera(double azimuth_deg, double elevation_deg, double radius = 3.0, double vfov_deg = 45.0);

inline const Vec3& light_direction() {
  static const Vec3 l = Vec3(1, 1, 1).normalized();
  return l;
}

// Opaque two-sided Lambert render: hit -> (albedo * max(0, n.l), 1), miss -> 0.
RgbaImage cast_render(const TriangleBvh& bvh, const Camera& camera, int size, const Vec3& albedo);
RgbaImage cast_render(const TriangleMesh& mesh, const Camera& camera, int size, const Vec3& albedo);

}  // namespace forge
