// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mesh_io/mesh.hpp"

namespace forge {

// Organ-like stand-ins.
inline const std::vector<std::string> kOrganCategories = {"sphereoid", "lobed_blob", "curved_tube", "bilobe"};
// Generic shapes for the pretraining corpus.
inline const std::vector<std::string> kGenericCategories = {"sphere", "rounded_box", "torus", "capsule"};

bool is_synth_category(std::string_view category);

// Ranges: radii in [0.3, 1.0], minor_radius in [0.05, 0.3], amplitude in [0, 0.3].
struct SynthParams {
  Vec3 radii = Vec3(1.0, 1.0, 1.0);
  double minor_radius = 0.15;
  double amplitude = 0.0;
  int subdivisions = 3;

  void check() const;
};

// Category-appropriate parameters drawn from `seed`.
SynthParams random_synth_params(std::string_view category, std::uint64_t seed);

// Deterministic watertight mesh for (category, params, seed).
TriangleMesh synth_shape(std::string_view category, const SynthParams& params, std::uint64_t seed);

}  // namespace forge
