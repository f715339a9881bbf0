// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "dataset/synth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "common/error.hpp"
#include "common/hash.hpp"
#include "common/rng.hpp"
#include "geometry/primitives.hpp"

namespace forge {

namespace {

constexpr std::uint64_t kParamStream = 0x70617261ULL;
constexpr std::uint64_t kShapeStream = 0x73686170ULL;

Rng category_rng(std::string_view category, std::uint64_t seed, std::uint64_t stream) {
  return Rng(derive_seed(seed, stream, fnv1a64(category)));
}

Vec3 random_unit(Rng& rng) {
  for (;;) {
    const Vec3 v(rng.normal(), rng.normal(), rng.normal());
    const double n = v.norm();
    if (n > 1e-9) return v / n;
  }
}

// Low-frequency band of cosines on the unit sphere, |noise| <= 1.
class SphereNoise {
 public:
  SphereNoise(Rng& rng, int terms = 4) {
    double total = 0.0;
    for (int k = 0; k < terms; ++k) {
      Term t{random_unit(rng), rng.uniform(1.0, 3.0), rng.uniform(0.0, 2.0 * std::numbers::pi), rng.uniform(0.5, 1.0)};
      total += t.weight;
      terms_.push_back(t);
    }
    for (auto& t : terms_) t.weight /= total;
  }

  double operator()(const Vec3& u) const {
    double s = 0.0;
    for (const auto& t : terms_) s += t.weight * std::cos(t.frequency * t.direction.dot(u) + t.phase);
    return s;
  }

 private:
  struct Term {
    Vec3 direction;
    double frequency;
    double phase;
    double weight;
  };
  std::vector<Term> terms_;
};

// Icosphere connectivity with each vertex moved to radius(u) along its direction.
TriangleMesh radial_mesh(int subdivisions, const std::function<double(const Vec3&)>& radius) {
  TriangleMesh mesh = make_icosphere(subdivisions);
  for (auto& v : mesh.vertices) {
    const Vec3 u = v.normalized();
    v = radius(u) * u;
  }
  return mesh;
}

// Boundary radius along u of a region star-shaped about the origin
// (inside(p) < 0), by bisection.
double star_radius(const std::function<double(const Vec3&)>& inside, const Vec3& u) {
  double lo = 0.0, hi = 4.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (inside(mid * u) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double ellipsoid_field(const Vec3& p, const Vec3& center, const Vec3& radii) {
  return ((p - center).cwiseQuotient(radii).norm() - 1.0) * radii.minCoeff();
}

double smooth_min(double a, double b, double k) {
  const double h = std::clamp(0.5 + 0.5 * (b - a) / k, 0.0, 1.0);
  return b + (a - b) * h - k * h * (1.0 - h);
}

TriangleMesh sweep_tube(const std::array<Vec3, 4>& ctrl, double radius, int rings = 48, int segments = 16) {
  const auto point = [&](double t) {
    const double s = 1.0 - t;
    return (s * s * s) * ctrl[0] + (3 * s * s * t) * ctrl[1] + (3 * s * t * t) * ctrl[2] + (t * t * t) * ctrl[3];
  };
  const auto tangent = [&](double t) {
    const double s = 1.0 - t;
    const Vec3 d = (3 * s * s) * (ctrl[1] - ctrl[0]) + (6 * s * t) * (ctrl[2] - ctrl[1]) + (3 * t * t) * (ctrl[3] - ctrl[2]);
    return d.normalized();
  };

  TriangleMesh mesh;
  Vec3 tan = tangent(0.0);
  Vec3 normal = tan.unitOrthogonal();
  for (int i = 0; i <= rings; ++i) {
    const double t = static_cast<double>(i) / rings;
    const Vec3 next = tangent(t);
    // parallel transport of the frame
    normal = (normal - normal.dot(next) * next).normalized();
    tan = next;
    const Vec3 binormal = tan.cross(normal);
    const Vec3 c = point(t);
    for (int j = 0; j < segments; ++j) {
      const double a = 2.0 * std::numbers::pi * j / segments;
      mesh.vertices.push_back(c + radius * (std::cos(a) * normal + std::sin(a) * binormal));
    }
  }
  const auto ring = [segments](int i, int j) { return static_cast<std::uint32_t>(i * segments + (j % segments)); };
  for (int i = 0; i < rings; ++i)
    for (int j = 0; j < segments; ++j) {
      mesh.triangles.push_back({ring(i, j), ring(i + 1, j + 1), ring(i + 1, j)});
      mesh.triangles.push_back({ring(i, j), ring(i, j + 1), ring(i + 1, j + 1)});
    }
  const auto start = static_cast<std::uint32_t>(mesh.vertices.size());
  mesh.vertices.push_back(point(0.0));
  mesh.vertices.push_back(point(1.0));
  for (int j = 0; j < segments; ++j) {
    mesh.triangles.push_back({start, ring(0, j), ring(0, j + 1)});
    mesh.triangles.push_back({start + 1, ring(rings, j + 1), ring(rings, j)});
  }
  return mesh;
}

void check_range(double v, double lo, double hi, const char* what) {
  if (!(v >= lo && v <= hi))
    fail(Errc::InvalidParams, std::string(what) + " = " + std::to_string(v) + " outside [" + std::to_string(lo) +
                                  ", " + std::to_string(hi) + "]");
}

}  // namespace

bool is_synth_category(std::string_view category) {
  const auto in = [category](const std::vector<std::string>& list) {
    return std::find(list.begin(), list.end(), category) != list.end();
  };
  return in(kOrganCategories) || in(kGenericCategories);
}

void SynthParams::check() const {
  for (int i = 0; i < 3; ++i) check_range(radii[i], 0.3, 1.0, "radius");
  check_range(minor_radius, 0.05, 0.3, "minor_radius");
  check_range(amplitude, 0.0, 0.3, "amplitude");
  if (subdivisions < 1 || subdivisions > 6) fail(Errc::InvalidParams, "subdivisions must be in [1, 6]");
}

SynthParams random_synth_params(std::string_view category, std::uint64_t seed) {
  if (!is_synth_category(category)) fail(Errc::InvalidParams, "unknown category '" + std::string(category) + "'");
  Rng rng = category_rng(category, seed, kParamStream);
  SynthParams p;
  for (int i = 0; i < 3; ++i) p.radii[i] = rng.uniform(0.55, 1.0);
  p.minor_radius = rng.uniform(0.1, 0.25);
  p.amplitude = rng.uniform(0.15, 0.3);
  if (category == "sphereoid" || category == "sphere" || category == "rounded_box" || category == "capsule")
    p.amplitude = 0.0;
  if (category == "torus") p.minor_radius = rng.uniform(0.15, 0.3);
  if (category == "sphereoid") p.radii = Vec3(rng.uniform(0.45, 0.65), rng.uniform(0.45, 0.65), rng.uniform(0.85, 1.0));
  if (category == "lobed_blob") {
    p.radii = Vec3::Constant(rng.uniform(0.7, 0.85));
    p.amplitude = rng.uniform(0.2, 0.3);
  }
  if (category == "bilobe") p.radii = Vec3(rng.uniform(0.5, 0.6), rng.uniform(0.4, 0.5), rng.uniform(0.4, 0.5));
  return p;
}

TriangleMesh synth_shape(std::string_view category, const SynthParams& params, std::uint64_t seed) {
  if (!is_synth_category(category)) fail(Errc::InvalidParams, "unknown category '" + std::string(category) + "'");
  params.check();
  Rng rng = category_rng(category, seed, kShapeStream);
  const Vec3 r = params.radii;

  if (category == "sphereoid" || category == "lobed_blob") {
    const SphereNoise noise(rng);
    const double amp = params.amplitude;
    TriangleMesh mesh = make_icosphere(params.subdivisions);
    for (auto& v : mesh.vertices) {
      const Vec3 u = v.normalized();
      v = (1.0 + amp * noise(u)) * r.cwiseProduct(u);
    }
    return mesh;
  }
  if (category == "curved_tube") {
    const auto jitter = [&rng](double x, double spread) {
      return Vec3(x, rng.uniform(-spread, spread), rng.uniform(-spread, spread));
    };
    const double span = r.x();
    const std::array<Vec3, 4> ctrl = {span * jitter(-0.8, 0.3), span * jitter(-0.3, 0.6), span * jitter(0.3, 0.6),
                                      span * jitter(0.8, 0.3)};
    return sweep_tube(ctrl, params.minor_radius);
  }
  if (category == "bilobe") {
    const Vec3 r2 = r * rng.uniform(0.7, 1.0);
    const double d = 0.5 * std::min(r.x(), r2.x());
    const Vec3 c1(-d, 0.0, 0.0), c2(d, 0.0, 0.0);
    const auto field = [&](const Vec3& p) {
      return smooth_min(ellipsoid_field(p, c1, r), ellipsoid_field(p, c2, r2), 0.1);
    };
    return radial_mesh(params.subdivisions, [&](const Vec3& u) { return star_radius(field, u); });
  }
  if (category == "sphere") return make_icosphere(params.subdivisions, r.x());
  if (category == "rounded_box") {
    return radial_mesh(params.subdivisions, [&](const Vec3& u) {
      const Vec3 q = u.cwiseQuotient(r).cwiseAbs();
      return std::pow(q.array().pow(4.0).sum(), -0.25);
    });
  }
  if (category == "torus") return make_torus(0.45 + 0.4 * (r.x() - 0.3) / 0.7, params.minor_radius);
  // capsule
  const double half = 0.6 * r.x();
  const double rho = 0.5 * std::min(r.y(), r.z());
  const auto field = [&](const Vec3& p) {
    const Vec3 axis(std::clamp(p.x(), -half, half), 0.0, 0.0);
    return (p - axis).norm() - rho;
  };
  return radial_mesh(params.subdivisions, [&](const Vec3& u) { return star_radius(field, u); });
}

}  // namespace forge
