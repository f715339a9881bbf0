// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "encoder/field.hpp"
#include "encoder/rays.hpp"

namespace forge {

// Rays plus their sample depths. Coarse depths are stratified-uniform on
// [t_near, t_far]; fine depths are drawn from the coarse weights and then
// held fixed, so the losses below are deterministic functions of the params.
struct RayBatch {
  std::vector<TrainingRay> rays;
  int n_coarse = 32;
  int n_fine = 64;
  std::vector<double> coarse_t;  // rays.size() x n_coarse
  std::vector<double> fine_t;    // rays.size() x n_fine
};

void stratified_depths(const Ray& ray, int n, Rng& rng, double* out);

// Inverse-CDF draw of `n` sorted depths from the piecewise-constant density
// proportional to (weights + 1e-5) over the bins between consecutive depths
// (the last bin ends at t_far).
void importance_depths(const Ray& ray, std::span<const double> depths, std::span<const double> weights, int n,
                       Rng& rng, double* out);

// Draws coarse depths, renders them with `params` and resamples fine depths.
RayBatch plan_ray_batch(const FieldSpec& spec, std::span<const double> params, std::vector<TrainingRay> rays,
                        int n_coarse, int n_fine, Rng& rng);

struct RenderResult {
  std::vector<Vec3> coarse_color, fine_color;
  std::vector<double> coarse_t, fine_t;  // transmittance per ray
};
RenderResult render_batch(const FieldSpec& spec, std::span<const double> params, const RayBatch& batch);

struct RenderLoss {
  double rgb = 0.0;           // mean |C_c - C|_1 + |C_f - C|_1
  double transmittance = 0.0; // mean |T_c - T| + |T_f - T|
};

// Evaluates both rendering losses; when `grad` is non-empty, accumulates the
// gradient of w_rgb * rgb + w_t * transmittance into it.
RenderLoss render_losses(const FieldSpec& spec, std::span<const double> params, const RayBatch& batch, double w_rgb,
                         double w_t, std::span<double> grad = {});

double loss_rgb(const FieldSpec& spec, std::span<const double> params, const RayBatch& batch,
                std::span<double> grad = {});
double loss_transmittance(const FieldSpec& spec, std::span<const double> params, const RayBatch& batch,
                          std::span<double> grad = {});

// mean |sdf(p) - truth|, gradient accumulated into `grad` scaled by `weight`.
double loss_sdf_direct(const FieldSpec& spec, std::span<const double> params, const SdfBatch& batch,
                       std::span<double> grad = {}, double weight = 1.0);

}  // namespace forge
