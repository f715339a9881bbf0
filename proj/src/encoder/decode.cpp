// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "encoder/decode.hpp"

#include <cmath>

#include "common/error.hpp"
#include "geometry/marching_cubes.hpp"
#include "geometry/sdf.hpp"

namespace forge {

VoxelGrid latent_sdf_grid(const Latent& latent, const FieldSpec& spec, int resolution) {
  if (resolution < 2) fail(Errc::InvalidArgument, "grid resolution must be >= 2");
  if (latent.values.size() != spec.param_count())
    fail(Errc::ShapeMismatch, "latent has " + std::to_string(latent.values.size()) + " values, field spec expects " +
                                  std::to_string(spec.param_count()));
  VoxelGrid grid(resolution, default_grid_bounds());
  // one z-slab at a time keeps the activation cache small
  const Eigen::Index slab = static_cast<Eigen::Index>(resolution) * resolution;
  Mat pts(3, slab);
  for (int k = 0; k < resolution; ++k) {
    for (int j = 0; j < resolution; ++j)
      for (int i = 0; i < resolution; ++i) pts.col(i + static_cast<Eigen::Index>(resolution) * j) = grid.position(i, j, k);
    const Vec sdf = field_sdf(spec, latent.values, pts);
    for (Eigen::Index c = 0; c < slab; ++c) grid.values[static_cast<std::size_t>(k) * slab + c] = sdf[c];
  }
  return grid;
}

TriangleMesh latent_to_mesh(const Latent& latent, const FieldSpec& spec, int resolution) {
  for (double v : latent.values)
    if (!std::isfinite(v)) fail(Errc::InvalidArgument, "latent has non-finite values");
  TriangleMesh mesh = extract_isosurface(latent_sdf_grid(latent, spec, resolution), 0.0);
  if (mesh.empty()) fail(Errc::EmptyReconstruction, "decoded field has no zero level set inside the grid");
  return mesh;
}

double render_disparity(const TriangleMesh& a, const TriangleMesh& b, const StfOptions& options) {
  if (options.views < 1 || options.size < 1) fail(Errc::InvalidArgument, "stf needs >= 1 view and size >= 1");
  const TriangleBvh ba(a), bb(b);
  double sum = 0.0;
  for (int v = 0; v < options.views; ++v) {
    const Camera cam = orbit_camera(360.0 * v / options.views, options.elevation_deg);
    const RgbaImage ia = cast_render(ba, cam, options.size, options.albedo);
    const RgbaImage ib = cast_render(bb, cam, options.size, options.albedo);
    for (std::size_t p = 0; p < ia.pixels.size(); ++p) {
      const Rgba& x = ia.pixels[p];
      const Rgba& y = ib.pixels[p];
      sum += (x.r - y.r) * (x.r - y.r) + (x.g - y.g) * (x.g - y.g) + (x.b - y.b) * (x.b - y.b) +
             (x.a - y.a) * (x.a - y.a);
    }
  }
  return sum / (static_cast<double>(options.views) * options.size * options.size);
}

double stf_metric(const Latent& latent, const FieldSpec& spec, const TriangleMesh& mesh, const StfOptions& options) {
  return render_disparity(latent_to_mesh(latent, spec, options.grid_resolution), mesh, options);
}

}  // namespace forge
