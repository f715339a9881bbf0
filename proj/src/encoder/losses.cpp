// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "encoder/losses.hpp"

#include <cmath>

#include "common/error.hpp"
#include "geometry/render.hpp"

namespace forge {

namespace {

constexpr double kWeightPadding = 1e-5;

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

struct SampleSet {
  Mat points;
  std::vector<double> delta;
};

SampleSet build_samples(const std::vector<TrainingRay>& rays, const std::vector<double>& depths, int per_ray) {
  SampleSet s;
  const std::size_t n = rays.size() * static_cast<std::size_t>(per_ray);
  if (depths.size() != n) fail(Errc::ShapeMismatch, "sample depth count does not match rays");
  s.points.resize(3, static_cast<Eigen::Index>(n));
  s.delta.resize(n);
  for (std::size_t r = 0; r < rays.size(); ++r) {
    const Ray& ray = rays[r].ray;
    const double* t = depths.data() + r * per_ray;
    for (int i = 0; i < per_ray; ++i) {
      const std::size_t col = r * per_ray + i;
      s.points.col(static_cast<Eigen::Index>(col)) = ray.at(t[i]);
      const double next = i + 1 < per_ray ? t[i + 1] : ray.t_far;
      s.delta[col] = std::max(0.0, next - t[i]);
    }
  }
  return s;
}

struct PassResult {
  std::vector<Vec3> color;
  std::vector<double> transmittance;
};

// One render pass (coarse or fine). Adds the pass's loss terms to `loss` and,
// when `grad` is non-empty, their gradient.
PassResult render_pass(const FieldSpec& spec, std::span<const double> params, const RayBatch& batch,
                       const std::vector<double>& depths, int per_ray, double w_rgb, double w_t, RenderLoss* loss,
                       std::span<double> grad) {
  const SampleSet s = build_samples(batch.rays, depths, per_ray);
  const bool need_grad = !grad.empty();
  MlpCache cache;
  const FieldOutputs out = field_eval(spec, params, s.points, need_grad ? &cache : nullptr);

  const std::size_t R = batch.rays.size();
  PassResult pass;
  pass.color.resize(R);
  pass.transmittance.resize(R);
  Vec g_sigma;
  Mat g_rgb;
  if (need_grad) {
    g_sigma = Vec::Zero(s.points.cols());
    g_rgb = Mat::Zero(3, s.points.cols());
  }
  std::vector<RaySample> samples(per_ray);
  std::vector<double> gs(per_ray);
  std::vector<Vec3> gc(per_ray);
  const double inv_r = R > 0 ? 1.0 / static_cast<double>(R) : 0.0;
  for (std::size_t r = 0; r < R; ++r) {
    for (int i = 0; i < per_ray; ++i) {
      const auto col = static_cast<Eigen::Index>(r * per_ray + i);
      samples[i] = RaySample{out.sigma[col], out.rgb.col(col), s.delta[static_cast<std::size_t>(col)]};
    }
    const Composite comp = composite_ray(samples);
    pass.color[r] = comp.color;
    pass.transmittance[r] = comp.transmittance;
    const Vec3 dc = comp.color - batch.rays[r].color;
    const double dt = comp.transmittance - batch.rays[r].transmittance;
    if (loss) {
      loss->rgb += dc.cwiseAbs().sum() * inv_r;
      loss->transmittance += std::abs(dt) * inv_r;
    }
    if (!need_grad) continue;
    const Vec3 gcol = (w_rgb * inv_r) * Vec3(sign(dc.x()), sign(dc.y()), sign(dc.z()));
    const double gt = w_t * inv_r * sign(dt);
    composite_ray_backward(samples, comp, gcol, gt, gs, gc);
    for (int i = 0; i < per_ray; ++i) {
      const auto col = static_cast<Eigen::Index>(r * per_ray + i);
      g_sigma[col] = gs[i];
      g_rgb.col(col) = gc[i];
    }
  }
  if (need_grad) field_backward(spec, params, cache, out, &g_sigma, &g_rgb, nullptr, grad);
  return pass;
}

}  // namespace

void stratified_depths(const Ray& ray, int n, Rng& rng, double* out) {
  const double span = ray.t_far - ray.t_near;
  for (int i = 0; i < n; ++i) out[i] = ray.t_near + span * ((i + rng.uniform()) / n);
}

void importance_depths(const Ray& ray, std::span<const double> depths, std::span<const double> weights, int n,
                       Rng& rng, double* out) {
  const std::size_t bins = depths.size();
  if (weights.size() != bins || bins == 0) fail(Errc::ShapeMismatch, "importance_depths: weights/depths mismatch");
  std::vector<double> cdf(bins + 1, 0.0);
  for (std::size_t j = 0; j < bins; ++j) cdf[j + 1] = cdf[j] + std::max(0.0, weights[j]) + kWeightPadding;
  const double total = cdf[bins];
  std::size_t j = 0;
  for (int k = 0; k < n; ++k) {
    const double u = total * ((k + rng.uniform()) / n);
    while (j + 1 < bins && cdf[j + 1] <= u) ++j;
    const double lo = depths[j];
    const double hi = j + 1 < bins ? depths[j + 1] : ray.t_far;
    const double mass = cdf[j + 1] - cdf[j];
    const double frac = std::clamp((u - cdf[j]) / mass, 0.0, 1.0);
    out[k] = lo + frac * (hi - lo);
  }
}

RayBatch plan_ray_batch(const FieldSpec& spec, std::span<const double> params, std::vector<TrainingRay> rays,
                        int n_coarse, int n_fine, Rng& rng) {
  if (n_coarse < 1 || n_fine < 1) fail(Errc::InvalidArgument, "sample counts must be positive");
  RayBatch b;
  b.rays = std::move(rays);
  b.n_coarse = n_coarse;
  b.n_fine = n_fine;
  const std::size_t R = b.rays.size();
  b.coarse_t.resize(R * n_coarse);
  b.fine_t.resize(R * n_fine);
  for (std::size_t r = 0; r < R; ++r) stratified_depths(b.rays[r].ray, n_coarse, rng, b.coarse_t.data() + r * n_coarse);

  const SampleSet s = build_samples(b.rays, b.coarse_t, n_coarse);
  const FieldOutputs out = field_eval(spec, params, s.points);
  std::vector<RaySample> samples(n_coarse);
  for (std::size_t r = 0; r < R; ++r) {
    for (int i = 0; i < n_coarse; ++i) {
      const auto col = static_cast<Eigen::Index>(r * n_coarse + i);
      samples[i] = RaySample{out.sigma[col], out.rgb.col(col), s.delta[static_cast<std::size_t>(col)]};
    }
    const Composite comp = composite_ray(samples);
    importance_depths(b.rays[r].ray, std::span<const double>(b.coarse_t.data() + r * n_coarse, n_coarse),
                      comp.weights, n_fine, rng, b.fine_t.data() + r * n_fine);
  }
  return b;
}

RenderResult render_batch(const FieldSpec& spec, std::span<const double> params, const RayBatch& batch) {
  RenderResult res;
  auto c = render_pass(spec, params, batch, batch.coarse_t, batch.n_coarse, 0, 0, nullptr, {});
  auto f = render_pass(spec, params, batch, batch.fine_t, batch.n_fine, 0, 0, nullptr, {});
  res.coarse_color = std::move(c.color);
  res.coarse_t = std::move(c.transmittance);
  res.fine_color = std::move(f.color);
  res.fine_t = std::move(f.transmittance);
  return res;
}

RenderLoss render_losses(const FieldSpec& spec, std::span<const double> params, const RayBatch& batch, double w_rgb,
                         double w_t, std::span<double> grad) {
  RenderLoss loss;
  render_pass(spec, params, batch, batch.coarse_t, batch.n_coarse, w_rgb, w_t, &loss, grad);
  render_pass(spec, params, batch, batch.fine_t, batch.n_fine, w_rgb, w_t, &loss, grad);
  return loss;
}

double loss_rgb(const FieldSpec& spec, std::span<const double> params, const RayBatch& batch, std::span<double> grad) {
  return render_losses(spec, params, batch, 1.0, 0.0, grad).rgb;
}

double loss_transmittance(const FieldSpec& spec, std::span<const double> params, const RayBatch& batch,
                          std::span<double> grad) {
  return render_losses(spec, params, batch, 0.0, 1.0, grad).transmittance;
}

double loss_sdf_direct(const FieldSpec& spec, std::span<const double> params, const SdfBatch& batch,
                       std::span<double> grad, double weight) {
  const Eigen::Index m = batch.points.cols();
  if (batch.truth.size() != m) fail(Errc::ShapeMismatch, "sdf batch truth count mismatch");
  if (m == 0) return 0.0;
  const bool need_grad = !grad.empty();
  MlpCache cache;
  const FieldOutputs out = field_eval(spec, params, batch.points, need_grad ? &cache : nullptr);
  double loss = 0.0;
  Vec g(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double d = out.sdf[i] - batch.truth[i];
    loss += std::abs(d);
    g[i] = weight * sign(d) / static_cast<double>(m);
  }
  if (need_grad) field_backward(spec, params, cache, out, nullptr, nullptr, &g, grad);
  return loss / static_cast<double>(m);
}

}  // namespace forge
