// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "neural/mlp.hpp"

#include <cmath>
#include <string>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace forge {

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::Identity: return "identity";
    case Activation::Relu: return "relu";
    case Activation::Silu: return "silu";
  }
  return "identity";
}

Activation parse_activation(std::string_view name) {
  if (name == "identity") return Activation::Identity;
  if (name == "relu") return Activation::Relu;
  if (name == "silu") return Activation::Silu;
  fail(Errc::InvalidArgument, "unknown activation '" + std::string(name) + "'");
}

void activate(Activation a, const Mat& pre, Mat& post) {
  post.resize(pre.rows(), pre.cols());
  switch (a) {
    case Activation::Identity:
      post = pre;
      break;
    case Activation::Relu:
      post.array() = pre.array().max(0.0);
      break;
    case Activation::Silu:
      post.array() = pre.array() / (1.0 + (-pre.array()).exp());
      break;
  }
}

void activation_backward(Activation a, const Mat& pre, Mat& grad) {
  switch (a) {
    case Activation::Identity:
      break;
    case Activation::Relu:
      grad.array() *= (pre.array() > 0.0).cast<double>();
      break;
    case Activation::Silu: {
      const auto s = 1.0 / (1.0 + (-pre.array()).exp());
      grad.array() *= s * (1.0 + pre.array() * (1.0 - s));
      break;
    }
  }
}

void MlpSpec::check() const {
  if (widths.size() < 2) fail(Errc::InvalidArgument, "MLP needs at least input and output widths");
  for (int w : widths)
    if (w < 1) fail(Errc::InvalidArgument, "MLP widths must be positive");
}

std::size_t MlpSpec::param_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < layers(); ++l) n += (in(l) + 1) * out(l);
  return n;
}

std::size_t MlpSpec::weight_offset(std::size_t layer) const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < layer; ++l) n += (in(l) + 1) * out(l);
  return n;
}

std::vector<LayerParams> unflatten(const MlpSpec& spec, std::span<const double> params) {
  if (params.size() != spec.param_count()) fail(Errc::ShapeMismatch, "parameter vector length does not match spec");
  std::vector<LayerParams> layers(spec.layers());
  for (std::size_t l = 0; l < spec.layers(); ++l) {
    const auto o = static_cast<Eigen::Index>(spec.out(l)), i = static_cast<Eigen::Index>(spec.in(l));
    layers[l].weight = Eigen::Map<const Mat>(params.data() + spec.weight_offset(l), o, i);
    layers[l].bias = Eigen::Map<const Vec>(params.data() + spec.bias_offset(l), o);
  }
  return layers;
}

std::vector<double> flatten(const MlpSpec& spec, const std::vector<LayerParams>& layers) {
  if (layers.size() != spec.layers()) fail(Errc::ShapeMismatch, "layer count does not match spec");
  std::vector<double> params(spec.param_count());
  for (std::size_t l = 0; l < spec.layers(); ++l) {
    const auto o = static_cast<Eigen::Index>(spec.out(l)), i = static_cast<Eigen::Index>(spec.in(l));
    if (layers[l].weight.rows() != o || layers[l].weight.cols() != i || layers[l].bias.size() != o)
      fail(Errc::ShapeMismatch, "layer " + std::to_string(l) + " has the wrong shape");
    Eigen::Map<Mat>(params.data() + spec.weight_offset(l), o, i) = layers[l].weight;
    Eigen::Map<Vec>(params.data() + spec.bias_offset(l), o) = layers[l].bias;
  }
  return params;
}

std::vector<double> init_params(const MlpSpec& spec, std::uint64_t seed) {
  spec.check();
  std::vector<double> params(spec.param_count(), 0.0);
  Rng rng(seed);
  for (std::size_t l = 0; l < spec.layers(); ++l) {
    const double bound = std::sqrt(6.0 / static_cast<double>(spec.in(l)));
    double* w = params.data() + spec.weight_offset(l);
    for (std::size_t k = 0; k < spec.in(l) * spec.out(l); ++k) w[k] = rng.uniform(-bound, bound);
  }
  return params;
}

Mat mlp_forward(const MlpSpec& spec, std::span<const double> params, const Mat& input, MlpCache* cache) {
  spec.check();
  if (params.size() != spec.param_count()) fail(Errc::ShapeMismatch, "parameter vector length does not match spec");
  if (input.rows() != spec.widths.front())
    fail(Errc::ShapeMismatch, "input width " + std::to_string(input.rows()) + " does not match spec width " +
                                  std::to_string(spec.widths.front()));
  const std::size_t L = spec.layers();
  MlpCache local;
  MlpCache& c = cache ? *cache : local;
  c.pre.resize(L);
  c.post.resize(L + 1);
  c.post[0] = input;
  for (std::size_t l = 0; l < L; ++l) {
    dense_forward(params.data() + spec.weight_offset(l), params.data() + spec.bias_offset(l), spec.out(l), spec.in(l),
                  c.post[l], c.pre[l]);
    activate(l + 1 == L ? Activation::Identity : spec.hidden, c.pre[l], c.post[l + 1]);
    // without a cache only the latest activation is needed
    if (!cache && l > 0) c.post[l] = Mat();
  }
  return cache ? c.post[L] : std::move(c.post[L]);
}

void mlp_backward(const MlpSpec& spec, std::span<const double> params, const MlpCache& cache, const Mat& grad_output,
                  std::span<double> grad_params, Mat* grad_input) {
  const std::size_t L = spec.layers();
  if (cache.pre.size() != L || cache.post.size() != L + 1) fail(Errc::ShapeMismatch, "cache does not match spec");
  if (grad_params.size() != spec.param_count() || params.size() != spec.param_count())
    fail(Errc::ShapeMismatch, "gradient vector length does not match spec");
  if (grad_output.rows() != spec.widths.back() || grad_output.cols() != cache.post[0].cols())
    fail(Errc::ShapeMismatch, "output gradient shape does not match forward pass");
  Mat g = grad_output, gx;
  for (std::size_t l = L; l-- > 0;) {
    if (l + 1 != L) activation_backward(spec.hidden, cache.pre[l], g);
    const bool need_dx = l > 0 || grad_input;
    dense_backward(params.data() + spec.weight_offset(l), spec.out(l), spec.in(l), cache.post[l], g,
                   grad_params.data() + spec.weight_offset(l), grad_params.data() + spec.bias_offset(l),
                   need_dx ? &gx : nullptr);
    if (need_dx) g.swap(gx);
  }
  if (grad_input) *grad_input = std::move(g);
}

}  // namespace forge
