// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "encoder/field.hpp"

#include <cmath>
#include <numbers>

#include "common/error.hpp"

namespace forge {

MlpSpec FieldSpec::mlp() const {
  if (frequencies < 0) fail(Errc::InvalidArgument, "positional encoding frequency count must be >= 0");
  MlpSpec s;
  s.widths.push_back(input_width());
  for (int h : hidden) s.widths.push_back(h);
  s.widths.push_back(kOutputs);
  s.hidden = activation;
  s.check();
  return s;
}

std::string FieldSpec::id() const {
  std::string s = "pe" + std::to_string(frequencies) + "-";
  for (std::size_t i = 0; i < hidden.size(); ++i) s += (i ? "x" : "") + std::to_string(hidden[i]);
  if (hidden.empty()) s += "linear";
  return s + "-" + activation_name(activation);
}

Json FieldSpec::to_json() const {
  return {{"frequencies", frequencies}, {"hidden", hidden}, {"activation", activation_name(activation)}};
}

FieldSpec FieldSpec::from_json(const Json& j) {
  FieldSpec s;
  s.frequencies = j.value("frequencies", s.frequencies);
  s.hidden = j.value("hidden", s.hidden);
  s.activation = parse_activation(j.value("activation", std::string(activation_name(s.activation))));
  s.mlp();
  return s;
}

std::vector<double> initial_field_params(const FieldSpec& spec) { return init_params(spec.mlp(), kFieldInitSeed); }

Mat positional_encoding(const Mat& points, int frequencies) {
  if (points.rows() != 3) fail(Errc::ShapeMismatch, "points must be 3 x N");
  const Eigen::Index n = points.cols();
  Mat enc(3 + 6 * frequencies, n);
  enc.topRows(3) = points;
  for (int k = 0; k < frequencies; ++k) {
    const double f = std::ldexp(std::numbers::pi, k);
    for (int a = 0; a < 3; ++a) {
      const double* p = points.row(a).data();
      double* s = enc.row(3 + 6 * k + a).data();
      double* c = enc.row(3 + 6 * k + 3 + a).data();
      for (Eigen::Index i = 0; i < n; ++i) {
        s[i] = std::sin(f * p[i]);
        c[i] = std::cos(f * p[i]);
      }
    }
  }
  return enc;
}

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

FieldOutputs field_eval(const FieldSpec& spec, std::span<const double> params, const Mat& points, MlpCache* cache) {
  const MlpSpec mlp = spec.mlp();
  FieldOutputs out;
  out.raw = mlp_forward(mlp, params, positional_encoding(points, spec.frequencies), cache);
  const Eigen::Index n = points.cols();
  out.sigma.resize(n);
  out.rgb.resize(3, n);
  out.sdf.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.sigma[i] = softplus(out.raw(0, i));
    for (int c = 0; c < 3; ++c) out.rgb(c, i) = sigmoid(out.raw(1 + c, i));
    out.sdf[i] = out.raw(4, i);
  }
  return out;
}

Vec field_sdf(const FieldSpec& spec, std::span<const double> params, const Mat& points) {
  const FieldOutputs out = field_eval(spec, params, points);
  return out.sdf;
}

void field_backward(const FieldSpec& spec, std::span<const double> params, const MlpCache& cache,
                    const FieldOutputs& out, const Vec* grad_sigma, const Mat* grad_rgb, const Vec* grad_sdf,
                    std::span<double> grad_params) {
  const Eigen::Index n = out.raw.cols();
  Mat g = Mat::Zero(FieldSpec::kOutputs, n);
  if (grad_sigma)
    for (Eigen::Index i = 0; i < n; ++i) g(0, i) = (*grad_sigma)[i] * sigmoid(out.raw(0, i));
  if (grad_rgb)
    for (Eigen::Index i = 0; i < n; ++i)
      for (int c = 0; c < 3; ++c) {
        const double s = out.rgb(c, i);
        g(1 + c, i) = (*grad_rgb)(c, i) * s * (1.0 - s);
      }
  if (grad_sdf) g.row(4) = grad_sdf->transpose();
  mlp_backward(spec.mlp(), params, cache, g, grad_params);
}

}  // namespace forge
