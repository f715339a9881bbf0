// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "common/io.hpp"
#include "neural/mlp.hpp"

namespace forge {

// Implicit field network: positional encoding of (x, y, z), an MLP trunk, and
// five raw outputs mapped to sigma = softplus(r0), rgb = sigmoid(r1..r3),
// sdf = r4.
struct FieldSpec {
  int frequencies = 4;
  std::vector<int> hidden = {64, 64};
  Activation activation = Activation::Silu;

  static constexpr int kOutputs = 5;

  int input_width() const { return 3 + 6 * frequencies; }
  MlpSpec mlp() const;
  std::size_t param_count() const { return mlp().param_count(); }
  // Short stable identifier, e.g. "pe4-64x64-silu".
  std::string id() const;

  Json to_json() const;
  static FieldSpec from_json(const Json& j);
  bool operator==(const FieldSpec&) const = default;
};

// Shared initialization seed: every mesh starts its fit from the same field.
inline constexpr std::uint64_t kFieldInitSeed = 0x5eed'f1e1'd000'0001ULL;

std::vector<double> initial_field_params(const FieldSpec& spec);

struct Latent {
  std::vector<double> values;
  std::string field_spec_id;
};

// Encoded inputs, one column per point: [x, y, z, then for k = 0..L-1 the
// triples sin(2^k pi p) and cos(2^k pi p)].
Mat positional_encoding(const Mat& points, int frequencies);

struct FieldOutputs {
  Vec sigma;
  Mat rgb;  // 3 x N
  Vec sdf;
  Mat raw;  // 5 x N network outputs before the heads
};

// points: 3 x N.
FieldOutputs field_eval(const FieldSpec& spec, std::span<const double> params, const Mat& points,
                        MlpCache* cache = nullptr);

// Only the sdf head; cheaper for grid evaluation.
Vec field_sdf(const FieldSpec& spec, std::span<const double> params, const Mat& points);

double softplus(double x);
double sigmoid(double x);

// Backpropagates head gradients (dL/dsigma, dL/drgb, dL/dsdf; any may be
// empty) through the heads and network into `grad_params`.
void field_backward(const FieldSpec& spec, std::span<const double> params, const MlpCache& cache,
                    const FieldOutputs& out, const Vec* grad_sigma, const Mat* grad_rgb, const Vec* grad_sdf,
                    std::span<double> grad_params);

}  // namespace forge
