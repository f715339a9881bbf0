// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "diffusion/denoiser.hpp"

#include <cmath>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace forge {

namespace {

constexpr double kLnEps = 1e-5;

struct Offsets {
  std::size_t w_in, b_in;
  struct Block {
    std::size_t gain, bias, w1, b1, w2, b2;
  };
  std::vector<Block> blocks;
  std::size_t gain_f, bias_f, w_out, b_out, total;
};

Offsets offsets(const DenoiserSpec& s) {
  const auto w = static_cast<std::size_t>(s.width);
  const auto d = static_cast<std::size_t>(s.latent_dim);
  const auto in = static_cast<std::size_t>(s.input_width());
  Offsets o{};
  std::size_t at = 0;
  o.w_in = at;
  at += w * in;
  o.b_in = at;
  at += w;
  for (int b = 0; b < s.blocks; ++b) {
    Offsets::Block blk{};
    blk.gain = at;
    at += w;
    blk.bias = at;
    at += w;
    blk.w1 = at;
    at += w * w;
    blk.b1 = at;
    at += w;
    blk.w2 = at;
    at += w * w;
    blk.b2 = at;
    at += w;
    o.blocks.push_back(blk);
  }
  o.gain_f = at;
  at += w;
  o.bias_f = at;
  at += w;
  o.w_out = at;
  at += d * w;
  o.b_out = at;
  at += d;
  o.total = at;
  return o;
}

// Column-wise layer norm; writes the normalized (pre-affine) values to `norm`.
void layer_norm(const Mat& x, const double* gain, const double* bias, Mat& norm, Vec& inv_std, Mat& out) {
  const Eigen::Index w = x.rows(), n = x.cols();
  norm.resize(w, n);
  out.resize(w, n);
  inv_std.resize(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    double mean = 0.0;
    for (Eigen::Index r = 0; r < w; ++r) mean += x(r, c);
    mean /= static_cast<double>(w);
    double var = 0.0;
    for (Eigen::Index r = 0; r < w; ++r) var += (x(r, c) - mean) * (x(r, c) - mean);
    var /= static_cast<double>(w);
    const double inv = 1.0 / std::sqrt(var + kLnEps);
    inv_std[c] = inv;
    for (Eigen::Index r = 0; r < w; ++r) {
      norm(r, c) = (x(r, c) - mean) * inv;
      out(r, c) = gain[r] * norm(r, c) + bias[r];
    }
  }
}

// Returns dL/dx; accumulates gain/bias gradients.
Mat layer_norm_backward(const Mat& norm, const Vec& inv_std, const double* gain, const Mat& grad_out, double* g_gain,
                        double* g_bias) {
  const Eigen::Index w = norm.rows(), n = norm.cols();
  Mat dx(w, n);
  std::vector<double> dn(static_cast<std::size_t>(w));
  for (Eigen::Index c = 0; c < n; ++c) {
    double mean_dn = 0.0, mean_dn_n = 0.0;
    for (Eigen::Index r = 0; r < w; ++r) {
      const double g = grad_out(r, c);
      g_gain[r] += g * norm(r, c);
      g_bias[r] += g;
      dn[static_cast<std::size_t>(r)] = g * gain[r];
      mean_dn += dn[static_cast<std::size_t>(r)];
      mean_dn_n += dn[static_cast<std::size_t>(r)] * norm(r, c);
    }
    mean_dn /= static_cast<double>(w);
    mean_dn_n /= static_cast<double>(w);
    for (Eigen::Index r = 0; r < w; ++r)
      dx(r, c) = inv_std[c] * (dn[static_cast<std::size_t>(r)] - mean_dn - norm(r, c) * mean_dn_n);
  }
  return dx;
}

}  // namespace

std::size_t DenoiserSpec::param_count() const { return offsets(*this).total; }

void DenoiserSpec::check() const {
  if (latent_dim < 1 || blocks < 0 || width < 1 || !(cond_gain > 0.0) || !std::isfinite(cond_gain))
    fail(Errc::InvalidArgument, "invalid denoiser spec");
}

Json DenoiserSpec::to_json() const {
  return {{"latent_dim", latent_dim},
          {"blocks", blocks},
          {"width", width},
          {"activation", activation_name(activation)},
          {"cond_gain", cond_gain}};
}

DenoiserSpec DenoiserSpec::from_json(const Json& j) {
  DenoiserSpec s;
  s.latent_dim = j.at("latent_dim").get<int>();
  s.blocks = j.value("blocks", s.blocks);
  s.width = j.value("width", s.width);
  s.activation = parse_activation(j.value("activation", std::string(activation_name(s.activation))));
  s.cond_gain = j.value("cond_gain", s.cond_gain);
  s.check();
  return s;
}

std::vector<double> init_denoiser(const DenoiserSpec& spec, std::uint64_t seed) {
  spec.check();
  const Offsets o = offsets(spec);
  std::vector<double> p(o.total, 0.0);
  Rng rng(seed);
  const auto w = static_cast<std::size_t>(spec.width);
  const auto fill = [&](std::size_t at, std::size_t count, std::size_t fan_in) {
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
    for (std::size_t i = 0; i < count; ++i) p[at + i] = rng.uniform(-bound, bound);
  };
  fill(o.w_in, w * spec.input_width(), static_cast<std::size_t>(spec.input_width()));
  for (const auto& b : o.blocks) {
    std::fill(p.begin() + static_cast<std::ptrdiff_t>(b.gain), p.begin() + static_cast<std::ptrdiff_t>(b.gain + w), 1.0);
    fill(b.w1, w * w, w);
    fill(b.w2, w * w, w);
  }
  std::fill(p.begin() + static_cast<std::ptrdiff_t>(o.gain_f), p.begin() + static_cast<std::ptrdiff_t>(o.gain_f + w),
            1.0);
  return p;
}

void time_embedding(int t, double* out) {
  constexpr int half = kTimeEmbedDim / 2;
  for (int i = 0; i < half; ++i) {
    const double f = std::exp(-std::log(10000.0) * i / half);
    out[i] = std::sin(t * f);
    out[half + i] = std::cos(t * f);
  }
}

Mat denoise(const DenoiserSpec& spec, std::span<const double> params, const Mat& x_t, std::span<const int> t,
            const Mat& cond, DenoiserCache* cache) {
  spec.check();
  const Offsets o = offsets(spec);
  if (params.size() != o.total) fail(Errc::ShapeMismatch, "denoiser parameter count mismatch");
  const Eigen::Index n = x_t.cols();
  if (x_t.rows() != spec.latent_dim || cond.rows() != kConditionDim || cond.cols() != n ||
      static_cast<Eigen::Index>(t.size()) != n)
    fail(Errc::ShapeMismatch, "denoiser input shapes do not match spec");

  DenoiserCache local;
  DenoiserCache& c = cache ? *cache : local;
  const auto w = static_cast<std::size_t>(spec.width);
  const auto D = static_cast<std::size_t>(spec.latent_dim);
  const double* P = params.data();

  c.input.resize(spec.input_width(), n);
  c.input.topRows(spec.latent_dim) = x_t;
  std::vector<double> te(kTimeEmbedDim);
  for (Eigen::Index col = 0; col < n; ++col) {
    time_embedding(t[static_cast<std::size_t>(col)], te.data());
    for (int i = 0; i < kTimeEmbedDim; ++i) c.input(spec.latent_dim + i, col) = te[static_cast<std::size_t>(i)];
  }
  c.input.bottomRows(kConditionDim) = spec.cond_scale() * cond;

  Mat h;
  dense_forward(P + o.w_in, P + o.b_in, w, static_cast<std::size_t>(spec.input_width()), c.input, h);
  c.blocks.resize(o.blocks.size());
  Mat ln_out, delta;
  for (std::size_t b = 0; b < o.blocks.size(); ++b) {
    auto& cb = c.blocks[b];
    const auto& ob = o.blocks[b];
    layer_norm(h, P + ob.gain, P + ob.bias, cb.norm, cb.inv_std, ln_out);
    dense_forward(P + ob.w1, P + ob.b1, w, w, ln_out, cb.pre);
    activate(spec.activation, cb.pre, cb.act);
    dense_forward(P + ob.w2, P + ob.b2, w, w, cb.act, delta);
    h += delta;
  }
  layer_norm(h, P + o.gain_f, P + o.bias_f, c.norm_final, c.inv_std_final, ln_out);
  Mat out;
  dense_forward(P + o.w_out, P + o.b_out, D, w, ln_out, out);
  return out;
}

void denoise_backward(const DenoiserSpec& spec, std::span<const double> params, const DenoiserCache& cache,
                      const Mat& grad_out, std::span<double> grad_params) {
  const Offsets o = offsets(spec);
  if (params.size() != o.total || grad_params.size() != o.total)
    fail(Errc::ShapeMismatch, "denoiser gradient length mismatch");
  const auto w = static_cast<std::size_t>(spec.width);
  const auto D = static_cast<std::size_t>(spec.latent_dim);
  const double* P = params.data();
  double* G = grad_params.data();

  // rebuild LN outputs from the cached normalized values
  const auto affine = [&](const Mat& norm, std::size_t gain, std::size_t bias) {
    Mat out(norm.rows(), norm.cols());
    for (Eigen::Index r = 0; r < norm.rows(); ++r)
      for (Eigen::Index c = 0; c < norm.cols(); ++c) out(r, c) = P[gain + r] * norm(r, c) + P[bias + r];
    return out;
  };

  Mat g_ln;
  dense_backward(P + o.w_out, D, w, affine(cache.norm_final, o.gain_f, o.bias_f), grad_out, G + o.w_out, G + o.b_out,
                 &g_ln);
  Mat g_h = layer_norm_backward(cache.norm_final, cache.inv_std_final, P + o.gain_f, g_ln, G + o.gain_f, G + o.bias_f);
  for (std::size_t b = o.blocks.size(); b-- > 0;) {
    const auto& cb = cache.blocks[b];
    const auto& ob = o.blocks[b];
    Mat g_act;
    dense_backward(P + ob.w2, w, w, cb.act, g_h, G + ob.w2, G + ob.b2, &g_act);
    activation_backward(spec.activation, cb.pre, g_act);
    Mat g_lnb;
    dense_backward(P + ob.w1, w, w, affine(cb.norm, ob.gain, ob.bias), g_act, G + ob.w1, G + ob.b1, &g_lnb);
    g_h += layer_norm_backward(cb.norm, cb.inv_std, P + ob.gain, g_lnb, G + ob.gain, G + ob.bias);
  }
  dense_backward(P + o.w_in, w, static_cast<std::size_t>(spec.input_width()), cache.input, g_h, G + o.w_in,
                 G + o.b_in, nullptr);
}

}  // namespace forge
