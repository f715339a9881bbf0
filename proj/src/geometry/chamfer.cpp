// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "geometry/chamfer.hpp"

#include <cmath>

#include "common/error.hpp"

namespace forge {

namespace {

// Nearest-neighbour search over a uniform hash grid, expanding shells until
// the best candidate is provably closer than any unvisited cell.
class PointGrid {
 public:
  explicit PointGrid(const std::vector<Vec3>& pts) : pts_(pts) {
    for (const auto& p : pts) box_.expand(p);
    const Vec3 ext = box_.extent().cwiseMax(Vec3::Constant(1e-12));
    const double volume = ext.x() * ext.y() * ext.z();
    cell_ = std::cbrt(volume / std::max<std::size_t>(1, pts.size() / 2));
    cell_ = std::max(cell_, 1e-3 * ext.maxCoeff());
    for (int a = 0; a < 3; ++a) dims_[a] = std::max(1, static_cast<int>(std::ceil(ext[a] / cell_)) + 1);
    start_.assign(static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2] + 1, 0);
    std::vector<std::size_t> cell_of(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      cell_of[i] = flat(coord(pts[i]));
      ++start_[cell_of[i] + 1];
    }
    for (std::size_t c = 1; c < start_.size(); ++c) start_[c] += start_[c - 1];
    items_.resize(pts.size());
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < pts.size(); ++i) items_[fill[cell_of[i]]++] = static_cast<std::uint32_t>(i);
  }

  double nearest(const Vec3& q) const {
    const auto c = coord(q);
    double best = std::numeric_limits<double>::infinity();
    const int max_ring = std::max({dims_[0], dims_[1], dims_[2]});
    for (int ring = 0; ring <= max_ring; ++ring) {
      for (int dz = -ring; dz <= ring; ++dz)
        for (int dy = -ring; dy <= ring; ++dy)
          for (int dx = -ring; dx <= ring; ++dx) {
            if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) != ring) continue;
            const std::array<int, 3> cc{c[0] + dx, c[1] + dy, c[2] + dz};
            if (cc[0] < 0 || cc[1] < 0 || cc[2] < 0 || cc[0] >= dims_[0] || cc[1] >= dims_[1] || cc[2] >= dims_[2])
              continue;
            const std::size_t f = flat(cc);
            for (std::size_t k = start_[f]; k < start_[f + 1]; ++k)
              best = std::min(best, (pts_[items_[k]] - q).squaredNorm());
          }
      // every unvisited cell is at least ring * cell_ away from q's cell boundary
      const double reach = ring * cell_;
      if (best <= reach * reach) break;
    }
    return std::sqrt(best);
  }

 private:
  std::array<int, 3> coord(const Vec3& p) const {
    std::array<int, 3> c;
    for (int a = 0; a < 3; ++a)
      c[a] = std::clamp(static_cast<int>(std::floor((p[a] - box_.lo[a]) / cell_)), 0, dims_[a] - 1);
    return c;
  }
  std::size_t flat(const std::array<int, 3>& c) const {
    return static_cast<std::size_t>(c[0]) + static_cast<std::size_t>(dims_[0]) * (c[1] + static_cast<std::size_t>(dims_[1]) * c[2]);
  }

  const std::vector<Vec3>& pts_;
  Aabb box_;
  double cell_ = 1.0;
  int dims_[3] = {1, 1, 1};
  std::vector<std::size_t> start_;
  std::vector<std::uint32_t> items_;
};

double mean_nearest(const std::vector<Vec3>& from, const PointGrid& to) {
  double sum = 0.0;
  for (const auto& p : from) sum += to.nearest(p);
  return sum / static_cast<double>(from.size());
}

}  // namespace

double chamfer_distance(const PointCloud& a, const PointCloud& b) {
  if (a.points.empty() || b.points.empty()) fail(Errc::EmptyCloud, "chamfer distance needs two non-empty clouds");
  const PointGrid ga(a.points), gb(b.points);
  return 0.5 * (mean_nearest(a.points, gb) + mean_nearest(b.points, ga));
}

}  // namespace forge
