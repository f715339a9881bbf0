// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "diffusion/objective.hpp"

#include <cmath>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace forge {

LatentStats LatentStats::compute(const Mat& latents) {
  const Eigen::Index n = latents.cols();
  if (n < 1) fail(Errc::EmptySet, "latent stats need at least one latent");
  LatentStats s;
  s.mean = latents.rowwise().sum() / static_cast<double>(n);
  s.std.resize(latents.rows());
  for (Eigen::Index r = 0; r < latents.rows(); ++r) {
    double var = 0.0;
    for (Eigen::Index c = 0; c < n; ++c) var += (latents(r, c) - s.mean[r]) * (latents(r, c) - s.mean[r]);
    s.std[r] = std::max(std::sqrt(var / static_cast<double>(n)), kStdFloor);
  }
  return s;
}

Vec LatentStats::standardize(const Vec& x) const {
  if (x.size() != mean.size()) fail(Errc::ShapeMismatch, "latent dimension does not match stats");
  return (x - mean).cwiseQuotient(std);
}

Vec LatentStats::destandardize(const Vec& z) const {
  if (z.size() != mean.size()) fail(Errc::ShapeMismatch, "latent dimension does not match stats");
  return z.cwiseProduct(std) + mean;
}

Mat LatentStats::standardize(const Mat& x) const {
  Mat out(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) out.col(c) = standardize(Vec(x.col(c)));
  return out;
}

Mat LatentStats::destandardize(const Mat& z) const {
  Mat out(z.rows(), z.cols());
  for (Eigen::Index c = 0; c < z.cols(); ++c) out.col(c) = destandardize(Vec(z.col(c)));
  return out;
}

DenoiseFn denoiser_fn(const DenoiserSpec& spec, std::span<const double> params) {
  return [spec, params](const Mat& x_t, std::span<const int> t, const Mat& cond) {
    return denoise(spec, params, x_t, t, cond);
  };
}

NoiseDraw draw_noise(std::size_t batch, int latent_dim, const NoiseSchedule& schedule, std::uint64_t seed,
                     double cond_dropout) {
  NoiseDraw d;
  d.t.resize(batch);
  d.eps.resize(latent_dim, static_cast<Eigen::Index>(batch));
  d.drop.resize(batch);
  Rng rng(seed);
  for (std::size_t b = 0; b < batch; ++b) {
    d.t[b] = 1 + static_cast<int>(rng.index(static_cast<std::uint64_t>(schedule.steps)));
    for (int r = 0; r < latent_dim; ++r) d.eps(r, static_cast<Eigen::Index>(b)) = rng.normal();
    d.drop[b] = cond_dropout > 0.0 && rng.bernoulli(cond_dropout);
  }
  return d;
}

namespace {

Mat noisy_inputs(const DiffusionBatch& batch, const NoiseSchedule& schedule, const NoiseDraw& draw) {
  Mat x_t(batch.x0.rows(), batch.x0.cols());
  for (Eigen::Index c = 0; c < batch.x0.cols(); ++c) {
    const double ab = schedule.alpha_bar_at(draw.t[static_cast<std::size_t>(c)]);
    x_t.col(c) = std::sqrt(ab) * batch.x0.col(c) + std::sqrt(1.0 - ab) * draw.eps.col(c);
  }
  return x_t;
}

Mat conditions(const DiffusionBatch& batch, const NoiseDraw& draw) {
  Mat cond = batch.cond;
  for (Eigen::Index c = 0; c < cond.cols(); ++c)
    if (draw.drop[static_cast<std::size_t>(c)]) cond.col(c).setZero();
  return cond;
}

}  // namespace

double diffusion_loss(const DenoiserSpec& spec, std::span<const double> params, const DiffusionBatch& batch,
                      const NoiseSchedule& schedule, const NoiseDraw& draw, std::span<double> grad) {
  const Eigen::Index B = batch.x0.cols();
  if (B == 0) fail(Errc::EmptySet, "empty diffusion batch");
  const double D = static_cast<double>(batch.x0.rows());
  DenoiserCache cache;
  const bool need_grad = !grad.empty();
  const Mat pred = denoise(spec, params, noisy_inputs(batch, schedule, draw), draw.t, conditions(batch, draw),
                           need_grad ? &cache : nullptr);
  const Mat diff = pred - batch.x0;
  const double loss = diff.squaredNorm() / (D * static_cast<double>(B));
  if (need_grad) denoise_backward(spec, params, cache, (2.0 / (D * static_cast<double>(B))) * diff, grad);
  return loss;
}

double training_step(const DenoiserSpec& spec, std::span<double> params, const DiffusionBatch& batch,
                     const NoiseSchedule& schedule, AdamState& optimizer, std::uint64_t seed, double cond_dropout) {
  const NoiseDraw draw = draw_noise(batch.size(), spec.latent_dim, schedule, seed, cond_dropout);
  std::vector<double> grad(params.size(), 0.0);
  const double loss = diffusion_loss(spec, params, batch, schedule, draw, grad);
  if (!std::isfinite(loss)) fail(Errc::NonFiniteGradient, "diffusion loss is not finite");
  adam_step(optimizer, params, grad);
  return loss;
}

double mse_on_latents(const DenoiseFn& denoise_fn, const DiffusionBatch& eval_set, const NoiseSchedule& schedule,
                      std::uint64_t seed, int passes) {
  const auto n = eval_set.size();
  if (n == 0) fail(Errc::EmptySet, "evaluation set is empty");
  if (passes < 1) fail(Errc::InvalidArgument, "passes must be >= 1");
  const auto D = eval_set.x0.rows();
  double total = 0.0;
  for (int p = 0; p < passes; ++p) {
    const NoiseDraw draw = draw_noise(n, static_cast<int>(D), schedule, derive_seed(seed, static_cast<std::uint64_t>(p)), 0.0);
    const Mat pred = denoise_fn(noisy_inputs(eval_set, schedule, draw), draw.t, eval_set.cond);
    total += (pred - eval_set.x0).squaredNorm() / static_cast<double>(D);
  }
  return total / (static_cast<double>(n) * passes);
}

}  // namespace forge
