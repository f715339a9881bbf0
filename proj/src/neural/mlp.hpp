// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "neural/dense.hpp"

namespace forge {

enum class Activation { Identity, Relu, Silu };

const char* activation_name(Activation a);
Activation parse_activation(std::string_view name);

// Elementwise activation and its derivative given the pre-activation.
void activate(Activation a, const Mat& pre, Mat& post);
void activation_backward(Activation a, const Mat& pre, Mat& grad);  // grad *= act'(pre)

struct MlpSpec {
  std::vector<int> widths;  // input, hidden..., output
  Activation hidden = Activation::Silu;

  std::size_t layers() const { return widths.size() - 1; }
  std::size_t param_count() const;
  // Offsets of layer l's weight block and bias block in the flat vector.
  std::size_t weight_offset(std::size_t layer) const;
  std::size_t bias_offset(std::size_t layer) const { return weight_offset(layer) + in(layer) * out(layer); }
  std::size_t in(std::size_t layer) const { return static_cast<std::size_t>(widths[layer]); }
  std::size_t out(std::size_t layer) const { return static_cast<std::size_t>(widths[layer + 1]); }

  void check() const;
};

// Per-layer weight (row-major out x in) and bias, unpacked from the flat vector.
struct LayerParams {
  Mat weight;
  Vec bias;
};
std::vector<LayerParams> unflatten(const MlpSpec& spec, std::span<const double> params);
std::vector<double> flatten(const MlpSpec& spec, const std::vector<LayerParams>& layers);

// He-uniform weights U(-sqrt(6/in), sqrt(6/in)), zero biases.
std::vector<double> init_params(const MlpSpec& spec, std::uint64_t seed);

struct MlpCache {
  std::vector<Mat> pre;   // pre[l] = W_l a_l + b_l
  std::vector<Mat> post;  // post[0] = input, post[l+1] = act(pre[l]); output layer is identity
};

Mat mlp_forward(const MlpSpec& spec, std::span<const double> params, const Mat& input, MlpCache* cache = nullptr);

// Reverse pass. Parameter gradients are accumulated into `grad_params`.
void mlp_backward(const MlpSpec& spec, std::span<const double> params, const MlpCache& cache, const Mat& grad_output,
                  std::span<double> grad_params, Mat* grad_input = nullptr);

}  // namespace forge
