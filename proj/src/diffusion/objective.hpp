// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "diffusion/denoiser.hpp"
#include "diffusion/schedule.hpp"
#include "neural/adam.hpp"

namespace forge {

// Per-dimension standardization of latents.
struct LatentStats {
  Vec mean;
  Vec std;  // floored at 1e-6

  static constexpr double kStdFloor = 1e-6;
  static LatentStats compute(const Mat& latents);  // D x N, N >= 1

  Vec standardize(const Vec& x) const;
  Vec destandardize(const Vec& z) const;
  Mat standardize(const Mat& x) const;
  Mat destandardize(const Mat& z) const;
};

// Any x0 predictor: (x_t D x B, timesteps, cond 64 x B) -> D x B.
using DenoiseFn = std::function<Mat(const Mat& x_t, std::span<const int> t, const Mat& cond)>;

DenoiseFn denoiser_fn(const DenoiserSpec& spec, std::span<const double> params);

// Standardized latents and their conditions, one column per example.
struct DiffusionBatch {
  Mat x0;    // D x B
  Mat cond;  // 64 x B
  std::size_t size() const { return static_cast<std::size_t>(x0.cols()); }
};

// Draws per column, in order: t ~ U{1..T}, eps ~ N(0, I_D), then the
// condition-dropout coin.
struct NoiseDraw {
  std::vector<int> t;
  Mat eps;
  std::vector<bool> drop;
};
NoiseDraw draw_noise(std::size_t batch, int latent_dim, const NoiseSchedule& schedule, std::uint64_t seed,
                     double cond_dropout);

// mean_b |x_theta(x_t, t, c) - x0|^2 / D. With a non-empty `grad`, the
// gradient w.r.t. params is accumulated into it.
double diffusion_loss(const DenoiserSpec& spec, std::span<const double> params, const DiffusionBatch& batch,
                      const NoiseSchedule& schedule, const NoiseDraw& draw, std::span<double> grad = {});

// One optimizer step on the x0 objective with 10% condition dropout by default.
double training_step(const DenoiserSpec& spec, std::span<double> params, const DiffusionBatch& batch,
                     const NoiseSchedule& schedule, AdamState& optimizer, std::uint64_t seed,
                     double cond_dropout = 0.1);

// Average x0 loss over the set with `passes` independent (t, eps) draws per
// example; no dropout, no update.
double mse_on_latents(const DenoiseFn& denoise, const DiffusionBatch& eval_set, const NoiseSchedule& schedule,
                      std::uint64_t seed, int passes = 8);

}  // namespace forge
