// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "geometry/bvh.hpp"

#include <algorithm>
#include <cmath>

namespace forge {

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return a + v * ab;
  }
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return a + w * ac;
  }
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return b + w * (c - b);
  }
  const double denom = va + vb + vc;
  if (denom == 0.0) {
    // Degenerate triangle: fall back to the closest of its edges.
    Vec3 best = a;
    double best_d = (p - a).squaredNorm();
    const Vec3 ends[3][2] = {{a, b}, {b, c}, {c, a}};
    for (const auto& e : ends) {
      const Vec3 d = e[1] - e[0];
      const double len2 = d.squaredNorm();
      const double t = len2 > 0.0 ? std::clamp((p - e[0]).dot(d) / len2, 0.0, 1.0) : 0.0;
      const Vec3 q = e[0] + t * d;
      const double dq = (p - q).squaredNorm();
      if (dq < best_d) {
        best_d = dq;
        best = q;
      }
    }
    return best;
  }
  const double v = vb / denom, w = vc / denom;
  return a + ab * v + ac * w;
}

namespace {

double box_distance_sq(const Aabb& box, const Vec3& p) {
  const Vec3 d = (box.lo - p).cwiseMax(Vec3::Zero()).cwiseMax(p - box.hi);
  return d.squaredNorm();
}

bool ray_hits_box(const Aabb& box, const Vec3& o, const Vec3& inv_d, double t0, double t1) {
  for (int a = 0; a < 3; ++a) {
    double ta = (box.lo[a] - o[a]) * inv_d[a];
    double tb = (box.hi[a] - o[a]) * inv_d[a];
    if (ta > tb) std::swap(ta, tb);
    // NaN from 0 * inf is treated as overlap
    if (!(ta <= t1) && !std::isnan(ta)) return false;
    if (!(tb >= t0) && !std::isnan(tb)) return false;
    if (!std::isnan(ta)) t0 = std::max(t0, ta);
    if (!std::isnan(tb)) t1 = std::min(t1, tb);
  }
  return t0 <= t1;
}

struct RayTri {
  bool hit = false;
  double t = 0.0;
  bool grazing = false;
};

// Moller-Trumbore; `grazing` flags hits near edges or a near-parallel ray.
RayTri intersect(const Vec3& o, const Vec3& d, const Vec3& a, const Vec3& b, const Vec3& c) {
  constexpr double kEdgeEps = 1e-9;
  RayTri r;
  const Vec3 e1 = b - a, e2 = c - a;
  const Vec3 pv = d.cross(e2);
  const double det = e1.dot(pv);
  const double scale = e1.norm() * e2.norm();
  if (std::abs(det) <= 1e-12 * scale) {
    r.grazing = scale > 0.0;  // coplanar ray: ambiguous unless the triangle is degenerate
    return r;
  }
  const double inv = 1.0 / det;
  const Vec3 tv = o - a;
  const double u = tv.dot(pv) * inv;
  if (u < -kEdgeEps || u > 1.0 + kEdgeEps) return r;
  const Vec3 qv = tv.cross(e1);
  const double v = d.dot(qv) * inv;
  if (v < -kEdgeEps || u + v > 1.0 + kEdgeEps) return r;
  r.t = e2.dot(qv) * inv;
  r.hit = true;
  if (u < kEdgeEps || v < kEdgeEps || u + v > 1.0 - kEdgeEps) r.grazing = true;
  return r;
}

}  // namespace

TriangleBvh::TriangleBvh(const TriangleMesh& mesh) {
  tris_.reserve(mesh.triangles.size());
  std::vector<Vec3> centroids;
  centroids.reserve(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    Tri tri{mesh.corner(t, 0), mesh.corner(t, 1), mesh.corner(t, 2), Vec3::Zero()};
    tri.normal = face_normal(tri.a, tri.b, tri.c);
    centroids.push_back((tri.a + tri.b + tri.c) / 3.0);
    tris_.push_back(tri);
  }
  order_.resize(tris_.size());
  for (std::uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
  if (!tris_.empty()) {
    nodes_.reserve(2 * tris_.size());
    build(0, static_cast<std::uint32_t>(tris_.size()), centroids);
  }
}

std::uint32_t TriangleBvh::build(std::uint32_t first, std::uint32_t count, std::vector<Vec3>& centroids) {
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  Aabb box, cbox;
  for (std::uint32_t i = first; i < first + count; ++i) {
    const Tri& t = tris_[order_[i]];
    box.expand(t.a);
    box.expand(t.b);
    box.expand(t.c);
    cbox.expand(centroids[order_[i]]);
  }
  nodes_[id].box = box;
  if (count <= 4) {
    nodes_[id].first = first;
    nodes_[id].count = count;
    return id;
  }
  int axis = 0;
  const Vec3 ext = cbox.extent();
  if (ext.y() > ext[axis]) axis = 1;
  if (ext.z() > ext[axis]) axis = 2;
  const std::uint32_t mid = first + count / 2;
  std::nth_element(order_.begin() + first, order_.begin() + mid, order_.begin() + first + count,
                   [&](std::uint32_t l, std::uint32_t r) {
                     if (centroids[l][axis] != centroids[r][axis]) return centroids[l][axis] < centroids[r][axis];
                     return l < r;
                   });
  const auto left = build(first, mid - first, centroids);
  const auto right = build(mid, first + count - mid, centroids);
  nodes_[id].first = left;
  nodes_[id].right = right;
  nodes_[id].count = 0;
  return id;
}

TriangleBvh::Closest TriangleBvh::closest(const Vec3& p) const {
  Closest best;
  if (nodes_.empty()) return best;
  std::uint32_t stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (box_distance_sq(node.box, p) > best.distance_sq) continue;
    if (node.count > 0) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        const Tri& t = tris_[order_[i]];
        const Vec3 q = closest_point_on_triangle(p, t.a, t.b, t.c);
        const double d = (q - p).squaredNorm();
        if (d < best.distance_sq || (d == best.distance_sq && order_[i] < best.triangle)) {
          best.distance_sq = d;
          best.triangle = order_[i];
          best.point = q;
        }
      }
      continue;
    }
    const double dl = box_distance_sq(nodes_[node.first].box, p);
    const double dr = box_distance_sq(nodes_[node.right].box, p);
    // push the farther child first so the nearer one is visited next
    if (dl <= dr) {
      stack[top++] = node.right;
      stack[top++] = node.first;
    } else {
      stack[top++] = node.first;
      stack[top++] = node.right;
    }
  }
  return best;
}

std::optional<TriangleBvh::Hit> TriangleBvh::first_hit(const Ray& ray) const {
  if (nodes_.empty()) return std::nullopt;
  const Vec3 inv(1.0 / ray.direction.x(), 1.0 / ray.direction.y(), 1.0 / ray.direction.z());
  std::optional<Hit> best;
  double t_max = ray.t_far;
  std::uint32_t stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (!ray_hits_box(node.box, ray.origin, inv, ray.t_near, t_max)) continue;
    if (node.count > 0) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        const Tri& t = tris_[order_[i]];
        const RayTri r = intersect(ray.origin, ray.direction, t.a, t.b, t.c);
        if (!r.hit || r.t < ray.t_near || r.t > t_max) continue;
        if (!best || r.t < best->t || (r.t == best->t && order_[i] < best->triangle)) {
          best = Hit{r.t, order_[i]};
          t_max = r.t;
        }
      }
      continue;
    }
    stack[top++] = node.right;
    stack[top++] = node.first;
  }
  return best;
}

TriangleBvh::Crossings TriangleBvh::count_crossings(const Vec3& origin, const Vec3& direction) const {
  Crossings out;
  if (nodes_.empty()) return out;
  constexpr double kOriginEps = 1e-9;
  const Vec3 inv(1.0 / direction.x(), 1.0 / direction.y(), 1.0 / direction.z());
  const double inf = std::numeric_limits<double>::infinity();
  std::uint32_t stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (!ray_hits_box(node.box, origin, inv, -kOriginEps, inf)) continue;
    if (node.count > 0) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        const Tri& t = tris_[order_[i]];
        const RayTri r = intersect(origin, direction, t.a, t.b, t.c);
        if (r.grazing && (!r.hit || r.t > -kOriginEps)) out.ambiguous = true;
        if (!r.hit) continue;
        if (std::abs(r.t) <= kOriginEps) out.ambiguous = true;
        if (r.t > 0.0) ++out.count;
      }
      continue;
    }
    stack[top++] = node.right;
    stack[top++] = node.first;
  }
  return out;
}

}  // namespace forge
