// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "geometry/render.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "common/error.hpp"

namespace forge {

Composite composite_ray(std::span<const RaySample> samples) {
  Composite out;
  out.weights.resize(samples.size());
  double optical_depth = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double tau = samples[i].sigma * samples[i].delta;
    const double t_i = std::exp(-optical_depth);
    const double w = t_i * -std::expm1(-tau);
    out.weights[i] = w;
    out.color += w * samples[i].rgb;
    optical_depth += tau;
  }
  out.transmittance = std::exp(-optical_depth);
  return out;
}

void composite_ray_backward(std::span<const RaySample> samples, const Composite& forward, const Vec3& grad_color,
                            double grad_transmittance, std::span<double> grad_sigma, std::span<Vec3> grad_rgb) {
  const std::size_t n = samples.size();
  if (grad_sigma.size() != n || grad_rgb.size() != n || forward.weights.size() != n)
    fail(Errc::ShapeMismatch, "composite_ray_backward: size mismatch");
  // dC/dsigma_k = delta_k (T_{k+1} c_k - sum_{i>k} w_i c_i), dT/dsigma_k = -delta_k T
  Vec3 suffix = Vec3::Zero();
  double optical_depth = 0.0;
  for (std::size_t i = 0; i < n; ++i) optical_depth += samples[i].sigma * samples[i].delta;
  for (std::size_t k = n; k-- > 0;) {
    optical_depth -= samples[k].sigma * samples[k].delta;
    const double t_next = std::exp(-(optical_depth + samples[k].sigma * samples[k].delta));
    const Vec3 dc = samples[k].delta * (t_next * samples[k].rgb - suffix);
    grad_sigma[k] = grad_color.dot(dc) - grad_transmittance * samples[k].delta * forward.transmittance;
    grad_rgb[k] = forward.weights[k] * grad_color;
    suffix += forward.weights[k] * samples[k].rgb;
  }
}

Ray Camera::pixel_ray(int x, int y, int s) const {
  const Vec3 forward = (target - position).normalized();
  const Vec3 right = forward.cross(up).normalized();
  const Vec3 true_up = right.cross(forward);
  const double half = std::tan(0.5 * vfov_deg * std::numbers::pi / 180.0);
  const double u = (2.0 * (x + 0.5) / s - 1.0) * half;
  const double v = (1.0 - 2.0 * (y + 0.5) / s) * half;
  Ray r;
  r.origin = position;
  r.direction = (forward + u * right + v * true_up).normalized();
  r.t_near = 0.0;
  r.t_far = std::numeric_limits<double>::infinity();
  return r;
}

Camera orbit_camera(double azimuth_deg, double elevation_deg, double radius, double vfov_deg) {
  const double az = azimuth_deg * std::numbers::pi / 180.0;
  const double el = elevation_deg * std::numbers::pi / 180.0;
  Camera c;
  c.position = radius * Vec3(std::cos(el) * std::sin(az), std::sin(el), std::cos(el) * std::cos(az));
  c.target = Vec3::Zero();
  c.up = Vec3::UnitY();
  c.vfov_deg = vfov_deg;
  return c;
}

RgbaImage cast_render(const TriangleBvh& bvh, const Camera& camera, int size, const Vec3& albedo) {
  if (size <= 0) fail(Errc::InvalidArgument, "render size must be positive");
  RgbaImage img(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const Ray ray = camera.pixel_ray(x, y, size);
      const auto hit = bvh.first_hit(ray);
      if (!hit) continue;
      Vec3 n = bvh.normal(hit->triangle);
      if (n.dot(ray.direction) > 0.0) n = -n;
      const double lambert = std::clamp(n.dot(light_direction()), 0.0, 1.0);
      img.at(x, y) = Rgba{albedo.x() * lambert, albedo.y() * lambert, albedo.z() * lambert, 1.0};
    }
  return img;
}

RgbaImage cast_render(const TriangleMesh& mesh, const Camera& camera, int size, const Vec3& albedo) {
  return cast_render(TriangleBvh(mesh), camera, size, albedo);
}

}  // namespace forge
