// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "encoder/field.hpp"
#include "geometry/render.hpp"
#include "geometry/types.hpp"

namespace forge {

VoxelGrid latent_sdf_grid(const Latent& latent, const FieldSpec& spec, int resolution);

// Zero level set of the sdf head on a resolution^3 lattice over [-1.1, 1.1]^3.
// Throws EmptyReconstruction when the level set is empty.
TriangleMesh latent_to_mesh(const Latent& latent, const FieldSpec& spec, int resolution = 64);

struct StfOptions {
  int views = 4;        // cameras at equal azimuth steps
  int size = 64;        // image side s
  double elevation_deg = 30.0;
  Vec3 albedo = Vec3(0.8, 0.8, 0.8);
  int grid_resolution = 64;
};

// (1 / (N s^2)) sum_i sum_pixels |Render_i(a) - Render_i(b)|^2 over RGBA.
double render_disparity(const TriangleMesh& a, const TriangleMesh& b, const StfOptions& options = {});

// render_disparity between the decoded latent and `mesh`.
double stf_metric(const Latent& latent, const FieldSpec& spec, const TriangleMesh& mesh,
                  const StfOptions& options = {});

}  // namespace forge
