// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "encoder/encode.hpp"

#include <chrono>

#include "common/error.hpp"
#include "common/hash.hpp"
#include "common/memory.hpp"
#include "encoder/decode.hpp"
#include "encoder/losses.hpp"
#include "geometry/transform.hpp"
#include "neural/adam.hpp"

namespace forge {

void EncodeConfig::check() const {
  if (rays < 1 || n_coarse < 1 || n_fine < 1 || sdf_points < 0 || stage1_steps < 0 || stage2_steps < 0)
    fail(Errc::InvalidArgument, "encode config counts must be positive");
  if (n_fine < n_coarse) fail(Errc::InvalidArgument, "encode config needs n_fine >= n_coarse");
  if (!(lr > 0.0) || !(lambda_sdf >= 0.0)) fail(Errc::InvalidArgument, "encode config lr/lambda out of range");
  field.mlp();
}

Json EncodeConfig::to_json() const {
  return {{"field", field.to_json()},
          {"rays", rays},
          {"n_coarse", n_coarse},
          {"n_fine", n_fine},
          {"stage1_steps", stage1_steps},
          {"stage2_steps", stage2_steps},
          {"sdf_points", sdf_points},
          {"lambda_sdf", lambda_sdf},
          {"lr", lr},
          {"albedo", {albedo.x(), albedo.y(), albedo.z()}},
          {"seed", seed}};
}

EncodeConfig EncodeConfig::from_json(const Json& j) {
  EncodeConfig c;
  if (j.contains("field")) c.field = FieldSpec::from_json(j.at("field"));
  c.rays = j.value("rays", c.rays);
  c.n_coarse = j.value("n_coarse", c.n_coarse);
  c.n_fine = j.value("n_fine", c.n_fine);
  c.stage1_steps = j.value("stage1_steps", c.stage1_steps);
  c.stage2_steps = j.value("stage2_steps", c.stage2_steps);
  c.sdf_points = j.value("sdf_points", c.sdf_points);
  c.lambda_sdf = j.value("lambda_sdf", c.lambda_sdf);
  c.lr = j.value("lr", c.lr);
  if (j.contains("albedo")) {
    const auto a = j.at("albedo").get<std::vector<double>>();
    if (a.size() != 3) fail(Errc::InvalidArgument, "albedo must have 3 components");
    c.albedo = Vec3(a[0], a[1], a[2]);
  }
  c.seed = j.value("seed", c.seed);
  c.check();
  return c;
}

std::string EncodeConfig::hash() const { return hex64(fnv1a64(canonical_dump(to_json()))); }

Json FitReport::to_json() const {
  Json j = {{"steps", loss_trace.size()},
            {"stage1_steps", stage1_steps},
            {"final_rgb", final_rgb},
            {"final_transmittance", final_transmittance},
            {"final_sdf", final_sdf},
            {"elapsed_ms", elapsed_ms}};
  j["stf"] = stf ? Json(*stf) : Json(nullptr);
  j["final_loss"] = loss_trace.empty() ? 0.0 : loss_trace.back();
  return j;
}

EncodeResult encode_mesh(const TriangleMesh& input, const EncodeConfig& config, const EncodeOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  config.check();
  tune_allocator();
  const NormalizedMesh norm = normalize_mesh(input);
  const TriangleMesh& mesh = norm.mesh;
  const SignedDistance sdf(mesh);
  const FieldSpec& spec = config.field;

  std::vector<double> params = initial_field_params(spec);
  std::vector<double> grad(params.size());
  AdamState adam(params.size(), config.lr);
  Rng rng(derive_seed(config.seed, 0x656e636f6465ULL));

  FitReport report;
  report.stage1_steps = config.stage1_steps;
  const int total = config.stage1_steps + config.stage2_steps;
  report.loss_trace.reserve(static_cast<std::size_t>(total));
  for (int step = 0; step < total; ++step) {
    if (options.cancelled && options.cancelled()) fail(Errc::Cancelled, "encode cancelled");
    const bool stage2 = step >= config.stage1_steps;
    auto rays = sample_training_rays(sdf.bvh(), config.albedo, static_cast<std::size_t>(config.rays), rng);
    const RayBatch batch = plan_ray_batch(spec, params, std::move(rays), config.n_coarse, config.n_fine, rng);
    std::fill(grad.begin(), grad.end(), 0.0);
    const RenderLoss rl = render_losses(spec, params, batch, 1.0, 1.0, grad);
    double total_loss = rl.rgb + rl.transmittance;
    double sdf_loss = 0.0;
    if (stage2 && config.sdf_points > 0) {
      const SdfBatch sb = sample_sdf_batch(mesh, sdf, static_cast<std::size_t>(config.sdf_points), rng);
      sdf_loss = loss_sdf_direct(spec, params, sb, grad, config.lambda_sdf);
      total_loss += config.lambda_sdf * sdf_loss;
    }
    adam_step(adam, params, grad);
    report.loss_trace.push_back(total_loss);
    report.final_rgb = rl.rgb;
    report.final_transmittance = rl.transmittance;
    report.final_sdf = sdf_loss;
  }

  EncodeResult result;
  result.latent.values = std::move(params);
  result.latent.field_spec_id = spec.id();
  if (options.compute_stf) {
    try {
      report.stf = stf_metric(result.latent, spec, mesh, StfOptions{.albedo = config.albedo});
    } catch (const Error& e) {
      if (e.code() != Errc::EmptyReconstruction) throw;
      report.stf.reset();
    }
  }
  report.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  result.report = std::move(report);
  return result;
}

}  // namespace forge
