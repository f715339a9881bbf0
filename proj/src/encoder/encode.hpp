// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "common/io.hpp"
#include "encoder/field.hpp"
#include "mesh_io/mesh.hpp"

namespace forge {

struct EncodeConfig {
  FieldSpec field;
  int rays = 512;
  int n_coarse = 32;
  int n_fine = 64;
  int stage1_steps = 800;
  int stage2_steps = 800;
  int sdf_points = 1024;
  double lambda_sdf = 1.0;
  double lr = 5e-3;
  Vec3 albedo = Vec3(0.8, 0.8, 0.8);
  std::uint64_t seed = 0;

  void check() const;
  Json to_json() const;
  // Missing keys keep their defaults.
  static EncodeConfig from_json(const Json& j);
  // FNV-1a over the canonical JSON form; changes iff some field changes.
  std::string hash() const;
};

struct FitReport {
  std::vector<double> loss_trace;  // total objective per step, stage 1 then stage 2
  int stage1_steps = 0;
  double final_rgb = 0.0;
  double final_transmittance = 0.0;
  double final_sdf = 0.0;
  std::optional<double> stf;  // absent when the reconstruction was empty or not requested
  double elapsed_ms = 0.0;

  Json to_json() const;
};

struct EncodeResult {
  Latent latent;
  FitReport report;
};

struct EncodeOptions {
  bool compute_stf = true;
  // Polled between steps; returning true aborts with Errc::Cancelled.
  std::function<bool()> cancelled;
};

// Normalizes the mesh, then fits a field from the shared initialization:
// stage 1 minimizes L_rgb + L_T, stage 2 adds lambda_sdf * L_sdf. Bit-exact
// for a given (mesh, config).
EncodeResult encode_mesh(const TriangleMesh& mesh, const EncodeConfig& config, const EncodeOptions& options = {});

}  // namespace forge
