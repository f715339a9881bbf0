// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "common/io.hpp"
#include "diffusion/text_embed.hpp"
#include "neural/mlp.hpp"

namespace forge {

inline constexpr int kTimeEmbedDim = 32;

// Residual MLP predicting x0 from [x_t ; time embedding ; condition].
//
// Flat parameter layout, in order:
//   W_in (width x (D + 96)), b_in
//   per block: ln_gain, ln_bias, W1 (width x width), b1, W2 (width x width), b2
//   final ln_gain, ln_bias, W_out (D x width), b_out
// Block: h += W2 act(W1 LN(h) + b1) + b2. Output: W_out LN(h) + b_out.
struct DenoiserSpec {
  int latent_dim = 0;
  int blocks = 4;
  int width = 512;
  Activation activation = Activation::Silu;
  // The condition enters the trunk as cond_gain * sqrt(latent_dim) * cond.
  double cond_gain = 10.0;

  int input_width() const { return latent_dim + kTimeEmbedDim + kConditionDim; }
  double cond_scale() const { return cond_gain * std::sqrt(static_cast<double>(latent_dim)); }
  std::size_t param_count() const;
  void check() const;

  Json to_json() const;
  static DenoiserSpec from_json(const Json& j);
  bool operator==(const DenoiserSpec&) const = default;
};

// He-uniform for W_in, W1, W2; unit gains; zero biases and zero W_out, so a
// fresh denoiser predicts 0.
std::vector<double> init_denoiser(const DenoiserSpec& spec, std::uint64_t seed);

// Sinusoidal embedding: [sin(t f_i), cos(t f_i)], f_i = 10000^(-i/16), i < 16.
void time_embedding(int t, double* out);

struct DenoiserCache;

// x_t: D x B; t: B timesteps; cond: 64 x B. Returns D x B. Columns are
// independent, so each equals its single-column evaluation bit for bit.
Mat denoise(const DenoiserSpec& spec, std::span<const double> params, const Mat& x_t, std::span<const int> t,
            const Mat& cond, DenoiserCache* cache = nullptr);

// Accumulates dL/dparams given dL/doutput from a cached forward pass.
void denoise_backward(const DenoiserSpec& spec, std::span<const double> params, const DenoiserCache& cache,
                      const Mat& grad_out, std::span<double> grad_params);

struct DenoiserCache {
  Mat input;
  struct Block {
    Mat norm, pre, act;
    Vec inv_std;
  };
  std::vector<Block> blocks;
  Mat norm_final;
  Vec inv_std_final;
};

}  // namespace forge
