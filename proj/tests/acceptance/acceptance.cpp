// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

// One PASS/FAIL line per criterion. Usage: forge_acceptance [--work DIR] [N...]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "common/io.hpp"
#include "common/rng.hpp"
#include "dataset/cache.hpp"
#include "dataset/entry.hpp"
#include "dataset/synth.hpp"
#include "diffusion/denoiser.hpp"
#include "diffusion/objective.hpp"
#include "diffusion/sampler.hpp"
#include "diffusion/schedule.hpp"
#include "diffusion/text_embed.hpp"
#include "encoder/decode.hpp"
#include "encoder/encode.hpp"
#include "encoder/field.hpp"
#include "encoder/losses.hpp"
#include "encoder/rays.hpp"
#include "geometry/bvh.hpp"
#include "geometry/chamfer.hpp"
#include "geometry/marching_cubes.hpp"
#include "geometry/primitives.hpp"
#include "geometry/render.hpp"
#include "geometry/sampling.hpp"
#include "geometry/sdf.hpp"
#include "geometry/transform.hpp"
#include "mesh_io/formats.hpp"
#include "mesh_io/mesh.hpp"
#include "neural/adam.hpp"
#include "neural/gradcheck.hpp"
#include "neural/mlp.hpp"
#include "pipeline/checkpoint.hpp"
#include "pipeline/evaluate.hpp"
#include "pipeline/train.hpp"
#include "service/generator.hpp"
#include "service/server.hpp"
#include "support/octahedron_model.hpp"

#include <httplib.h>

namespace fs = std::filesystem;
using namespace forge;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

fs::path g_work;

// ---------------------------------------------------------------------------

TriangleMesh random_mesh(std::mt19937_64& gen, bool float_exact) {
  std::uniform_int_distribution<int> nv(3, 60);
  std::uniform_real_distribution<double> coord(-50.0, 50.0);
  TriangleMesh m;
  const int n = nv(gen);
  for (int i = 0; i < n; ++i) {
    Vec3 v(coord(gen), coord(gen), coord(gen));
    if (float_exact) v = v.cast<float>().cast<double>();
    m.vertices.push_back(v);
  }
  std::uniform_int_distribution<std::uint32_t> idx(0, static_cast<std::uint32_t>(n - 1));
  std::uniform_int_distribution<int> nt(1, 80);
  const int t = nt(gen);
  for (int i = 0; i < t; ++i) {
    std::uint32_t a = idx(gen), b = idx(gen), c = idx(gen);
    while (b == a) b = idx(gen);
    while (c == a || c == b) c = idx(gen);
    m.triangles.push_back({a, b, c});
  }
  return m;
}

Outcome criterion1() {
  Outcome o;
  std::mt19937_64 gen(2026);
  int stl_bad = 0, obj_bad = 0;
  double worst_obj = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const TriangleMesh m = random_mesh(gen, true);
    const std::string bytes = write_stl(m, StlEncoding::Binary);
    const TriangleMesh back = parse_stl(bytes);
    bool same = back.triangle_count() == m.triangle_count() && write_stl(back, StlEncoding::Binary) == bytes;
    for (std::size_t t = 0; same && t < m.triangle_count(); ++t)
      for (int k = 0; k < 3; ++k) same = same && back.corner(t, k) == m.corner(t, k);
    stl_bad += !same;

    const TriangleMesh r = random_mesh(gen, false);
    const ObjParseResult parsed = parse_obj(write_obj(r));
    bool ok = parsed.mesh.vertices.size() == r.vertices.size() && parsed.mesh.triangles == r.triangles;
    for (std::size_t v = 0; ok && v < r.vertices.size(); ++v)
      for (int a = 0; a < 3; ++a) {
        const double x = r.vertices[v][a], y = parsed.mesh.vertices[v][a];
        const double rel = std::abs(x - y) / std::max(std::abs(x), 1e-300);
        worst_obj = std::max(worst_obj, rel);
        ok = ok && rel <= 5e-9;
      }
    obj_bad += !ok;
  }
  o.check(stl_bad == 0, std::to_string(stl_bad) + " STL mismatches");
  o.check(obj_bad == 0, std::to_string(obj_bad) + " OBJ mismatches");

  const TriangleMesh soup = to_soup(make_cube());
  const TriangleMesh from_stl = parse_stl(write_stl(soup, StlEncoding::Binary));
  const TriangleMesh welded = weld_vertices(from_stl, 0.0);
  const TriangleMesh obj = parse_obj(write_obj(welded)).mesh;
  o.check(from_stl.vertices.size() == 36 && obj.vertices.size() == 8,
          "cube weld " + std::to_string(from_stl.vertices.size()) + "->" + std::to_string(obj.vertices.size()));
  o.check(validate(obj).watertight(), "welded cube not watertight");
  o.detail = "1000 STL bit-exact, 1000 OBJ max rel " + fmt("%.2e", worst_obj) + ", cube " +
             std::to_string(from_stl.vertices.size()) + "->" + std::to_string(obj.vertices.size()) +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion2() {
  Outcome o;
  std::vector<std::pair<std::string, double>> results;
  const auto record = [&](const std::string& name, double err) {
    results.emplace_back(name, err);
    o.check(err < 1e-5, name + " " + fmt("%.2e", err));
  };

  {
    const FieldSpec spec;
    const auto p = initial_field_params(spec);
    Rng rng(41);
    Mat pts(3, 10);
    for (int j = 0; j < 10; ++j)
      for (int i = 0; i < 3; ++i) pts(i, j) = rng.uniform(-1.0, 1.0);
    Vec ws(10), wd(10);
    Mat wr(3, 10);
    for (int j = 0; j < 10; ++j) {
      ws[j] = rng.uniform(-1.0, 1.0);
      wd[j] = rng.uniform(-1.0, 1.0);
      for (int c = 0; c < 3; ++c) wr(c, j) = rng.uniform(-1.0, 1.0);
    }
    const LossFn loss = [&](std::span<const double> q, std::span<double> grad) {
      MlpCache cache;
      const auto out = field_eval(spec, q, pts, grad.empty() ? nullptr : &cache);
      if (!grad.empty()) {
        std::fill(grad.begin(), grad.end(), 0.0);
        field_backward(spec, q, cache, out, &ws, &wr, &wd, grad);
      }
      return ws.dot(out.sigma) + wr.cwiseProduct(out.rgb).sum() + wd.dot(out.sdf);
    };
    record("field", finite_diff_check(loss, p, 400, 1e-4, 3).max_relative_error);
  }

  {
    FieldSpec spec;
    spec.frequencies = 1;
    spec.hidden = {8};
    Rng init(5);
    std::vector<double> p(spec.param_count());
    for (auto& x : p) x = 0.5 * init.normal();
    const TriangleBvh bvh(make_icosphere(2, 0.7));
    Rng rng(3);
    const RayBatch batch =
        plan_ray_batch(spec, p, sample_training_rays(bvh, Vec3(0.8, 0.6, 0.4), 16, rng), 8, 16, rng);
    const TriangleMesh sphere = make_icosphere(2, 0.7);
    const SignedDistance sdf(sphere);
    const SdfBatch sdf_batch = sample_sdf_batch(sphere, sdf, 32, rng);
    const auto check = [&](const std::string& name, auto&& fn) {
      const LossFn loss = [&](std::span<const double> q, std::span<double> grad) {
        if (!grad.empty()) std::fill(grad.begin(), grad.end(), 0.0);
        return fn(q, grad);
      };
      record(name, finite_diff_check(loss, p, p.size(), 1e-4, 4).max_relative_error);
    };
    check("L_rgb", [&](auto q, auto g) { return loss_rgb(spec, q, batch, g); });
    check("L_T", [&](auto q, auto g) { return loss_transmittance(spec, q, batch, g); });
    check("L_sdf", [&](auto q, auto g) { return loss_sdf_direct(spec, q, sdf_batch, g); });
  }

  {
    DenoiserSpec spec;
    spec.latent_dim = 8;
    spec.blocks = 2;
    spec.width = 16;
    Rng rng(55);
    std::vector<double> p = init_denoiser(spec, 3);
    for (auto& v : p) v += 0.1 * rng.normal();
    Mat x(8, 4), w(8, 4), cond(kConditionDim, 4);
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < 8; ++i) {
        x(i, j) = rng.normal();
        w(i, j) = rng.normal();
      }
    const char* prompts[4] = {"liver", "a human heart", "", "lung"};
    for (int j = 0; j < 4; ++j) cond.col(j) = embed_text(prompts[j]).embedding;
    const std::vector<int> t = {1, 7, 300, 1000};
    const LossFn loss = [&](std::span<const double> q, std::span<double> grad) {
      DenoiserCache cache;
      const Mat out = denoise(spec, q, x, t, cond, grad.empty() ? nullptr : &cache);
      if (!grad.empty()) {
        std::fill(grad.begin(), grad.end(), 0.0);
        denoise_backward(spec, q, cache, w, grad);
      }
      return w.cwiseProduct(out).sum();
    };
    record("denoiser", finite_diff_check(loss, p, 600, 1e-4, 6).max_relative_error);

    const NoiseSchedule sched = make_schedule(50);
    const DiffusionBatch batch{x, cond};
    const NoiseDraw draw = draw_noise(4, 8, sched, 3, 0.5);
    const LossFn dloss = [&](std::span<const double> q, std::span<double> grad) {
      if (!grad.empty()) std::fill(grad.begin(), grad.end(), 0.0);
      return diffusion_loss(spec, q, batch, sched, draw, grad);
    };
    record("L_diffusion", finite_diff_check(dloss, p, 600, 1e-4, 7).max_relative_error);
  }

  std::string summary;
  for (const auto& [name, err] : results) summary += (summary.empty() ? "" : ", ") + name + " " + fmt("%.1e", err);
  o.detail = summary + (o.pass ? "" : "; " + o.detail);
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion3() {
  Outcome o;
  const double ln2 = std::log(2.0);
  const Vec3 c1(1.0, 0.0, 0.0), c2(0.0, 1.0, 0.0), c3(0.0, 0.0, 1.0);
  double worst = 0.0;
  const auto near = [&](double a, double b) {
    worst = std::max(worst, std::abs(a - b));
    return std::abs(a - b) <= 1e-12;
  };

  {
    const RaySample s[3] = {{ln2, c1, 1.0}, {ln2 / 2, c2, 2.0}, {2 * ln2, c3, 0.5}};
    const Composite r = composite_ray(s);
    o.check(near(r.transmittance, 0.125), "ln2 transmittance");
    o.check(near(r.weights[0], 0.5) && near(r.weights[1], 0.25) && near(r.weights[2], 0.125), "ln2 weights");
    o.check(near(r.color.x(), 0.5) && near(r.color.y(), 0.25) && near(r.color.z(), 0.125), "ln2 color");
  }
  {
    const RaySample s[4] = {{0.0, c1, 0.3}, {0.0, c2, 0.3}, {0.0, c3, 0.3}, {0.0, c1, 0.3}};
    const Composite r = composite_ray(s);
    o.check(near(r.transmittance, 1.0) && near(r.color.norm(), 0.0), "vacuum");
  }
  {
    const RaySample s[3] = {{1e6, c2, 0.1}, {5.0, c1, 0.1}, {5.0, c3, 0.1}};
    const Composite r = composite_ray(s);
    o.check(near(r.transmittance, 0.0) && near(r.weights[0], 1.0) && near(r.color.y(), 1.0) &&
                near(r.color.x(), 0.0),
            "saturation");
  }

  Rng rng(33);
  int monotone_bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const int n = 1 + static_cast<int>(rng.uniform(0.0, 12.0));
    std::vector<RaySample> s(static_cast<std::size_t>(n));
    for (auto& x : s) x = {rng.uniform(0.0, 5.0), Vec3(rng.uniform(), rng.uniform(), rng.uniform()),
                           rng.uniform(0.01, 0.5)};
    const Composite base = composite_ray(s);
    auto more = s;
    more[static_cast<std::size_t>(rng.uniform(0.0, n - 1e-9))].sigma += rng.uniform(0.0, 3.0);
    const Composite denser = composite_ray(more);
    if (!(denser.transmittance <= base.transmittance)) ++monotone_bad;
    double sum_w = 0.0;
    for (double w : base.weights) sum_w += w;
    if (std::abs(sum_w + base.transmittance - 1.0) > 1e-12) ++monotone_bad;
  }
  o.check(monotone_bad == 0, std::to_string(monotone_bad) + " property violations");
  const std::string base = "closed forms max err " + fmt("%.1e", worst) + ", 10000 monotone cases";
  o.detail = base + (o.pass ? "" : "; " + o.detail);
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion4() {
  Outcome o;
  const double center = signed_distance(make_icosphere(3), Vec3::Zero());
  o.check(center >= -1.0 && center <= -0.98, "icosphere center SDF " + fmt("%.5f", center));

  VoxelGrid g(64, Aabb::cube(1.5));
  for (int k = 0; k < 64; ++k)
    for (int j = 0; j < 64; ++j)
      for (int i = 0; i < 64; ++i) g.values[g.index(i, j, k)] = g.position(i, j, k).norm() - 1.0;
  const TriangleMesh iso = extract_isosurface(g);
  double worst_radius = 0.0;
  for (const auto& v : iso.vertices) worst_radius = std::max(worst_radius, std::abs(v.norm() - 1.0));
  o.check(!iso.empty() && worst_radius <= 1.5 * g.spacing(),
          "sphere radius error " + fmt("%.4f", worst_radius / g.spacing()) + " cells");

  const std::vector<std::pair<std::string, TriangleMesh>> fixtures = {
      {"sphereoid", synth_shape("sphereoid", random_synth_params("sphereoid", 1), 1)},
      {"lobed_blob", synth_shape("lobed_blob", random_synth_params("lobed_blob", 2), 2)},
      {"curved_tube", synth_shape("curved_tube", random_synth_params("curved_tube", 3), 3)},
      {"bilobe", synth_shape("bilobe", random_synth_params("bilobe", 4), 4)},
      {"torus", synth_shape("torus", random_synth_params("torus", 5), 5)},
  };
  std::string ratios;
  for (const auto& [name, mesh] : fixtures) {
    const TriangleMesh m = normalize_mesh(mesh).mesh;
    const VoxelGrid grid = sdf_grid(m, 64);
    const TriangleMesh recon = extract_isosurface(grid);
    if (recon.empty()) {
      o.check(false, name + " empty reconstruction");
      continue;
    }
    const double cd = chamfer_distance(sample_surface(recon, 4000, 7), sample_surface(m, 4000, 8));
    const double ratio = cd / grid.spacing();
    ratios += (ratios.empty() ? "" : ", ") + name + " " + fmt("%.2f", ratio);
    o.check(ratio < 4.0, name + " chamfer " + fmt("%.2f", ratio) + " cells");
  }
  const std::string base = "center " + fmt("%.4f", center) + ", radius err " +
                           fmt("%.2f", worst_radius / g.spacing()) + " cells, chamfer/cell: " + ratios;
  o.detail = base + (o.pass ? "" : "; " + o.detail);
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion5() {
  Outcome o;
  const TriangleMesh sphere = make_icosphere(3);
  const EncodeConfig config;
  const EncodeResult a = encode_mesh(sphere, config);
  const EncodeResult b = encode_mesh(sphere, config);
  o.check(a.latent.values == b.latent.values, "latents differ between runs");

  const TriangleMesh target = normalize_mesh(sphere).mesh;
  const TriangleMesh decoded = latent_to_mesh(a.latent, config.field, 64);
  double cd = std::numeric_limits<double>::infinity();
  if (decoded.empty()) {
    o.check(false, "decoded mesh empty");
  } else {
    cd = chamfer_distance(sample_surface(decoded, 5000, 1), sample_surface(target, 5000, 2));
    o.check(cd < 0.08, "chamfer " + fmt("%.4f", cd));
  }
  const double own = stf_metric(a.latent, config.field, sphere);
  const double other = stf_metric(a.latent, config.field, make_torus(0.6, 0.3));
  o.check(own < other, "stf sphere " + fmt("%.4f", own) + " >= torus " + fmt("%.4f", other));
  const std::string base = "chamfer " + fmt("%.4f", cd) + ", bit-identical, stf sphere " + fmt("%.4f", own) +
                           " < torus " + fmt("%.4f", other);
  o.detail = base + (o.pass ? "" : "; " + o.detail);
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion6() {
  Outcome o;
  const NoiseSchedule sched = make_schedule();
  bool monotone = sched.alpha_bar_at(0) == 1.0;
  for (int t = 1; t <= sched.steps; ++t) monotone = monotone && sched.alpha_bar_at(t) < sched.alpha_bar_at(t - 1);
  o.check(monotone, "alpha_bar not strictly decreasing");

  constexpr int kDraws = 100000;
  Rng rng(6);
  const Vec x0 = Vec::Zero(kDraws);
  double worst_var = 0.0;
  for (int t : {1, 100, 500, 1000}) {
    Vec eps(kDraws);
    for (auto& e : eps) e = rng.normal();
    const Vec xt = q_sample(x0, t, eps, sched);
    const double ab = sched.alpha_bar_at(t);
    const double var = xt.squaredNorm() / kDraws;
    const double rel = std::abs(var / (1.0 - ab) - 1.0);
    worst_var = std::max(worst_var, rel);
    o.check(rel < 0.02, "q_sample variance at t=" + std::to_string(t) + " off by " + fmt("%.3f", rel));
  }

  Vec x_star(32);
  for (auto& v : x_star) v = rng.normal();
  const DenoiseFn oracle = [x_star](const Mat& x_t, std::span<const int>, const Mat&) {
    Mat out(x_t.rows(), x_t.cols());
    for (Eigen::Index j = 0; j < x_t.cols(); ++j) out.col(j) = x_star;
    return out;
  };
  Mat cond(kConditionDim, 3);
  for (int j = 0; j < 3; ++j) cond.col(j) = embed_text("liver").embedding;
  const std::uint64_t seeds[3] = {0, 1, 2};
  const Mat out = sample_batch(oracle, 32, sched, cond, seeds);
  double worst_oracle = 0.0;
  for (int j = 0; j < 3; ++j) worst_oracle = std::max(worst_oracle, (out.col(j) - x_star).norm() / x_star.norm());
  o.check(worst_oracle < 1e-6, "oracle relative error " + fmt("%.2e", worst_oracle));

  DenoiserSpec spec;
  spec.latent_dim = 16;
  spec.blocks = 1;
  spec.width = 32;
  std::vector<double> p = init_denoiser(spec, 8);
  Mat latents(16, 8);
  for (int j = 0; j < 8; ++j)
    for (int i = 0; i < 16; ++i) latents(i, j) = rng.normal();
  Mat batch_cond(kConditionDim, 8);
  for (int j = 0; j < 8; ++j) batch_cond.col(j) = embed_text(j % 2 ? "liver" : "heart").embedding;
  const DiffusionBatch batch{latents, batch_cond};
  const NoiseDraw draw = draw_noise(8, 16, sched, 12, 0.0);
  AdamState adam(p.size(), 1e-4);
  std::vector<double> grad(p.size());
  double prev = std::numeric_limits<double>::infinity(), first = 0.0;
  int increases = 0;
  for (int step = 0; step <= 200; ++step) {
    std::fill(grad.begin(), grad.end(), 0.0);
    const double loss = diffusion_loss(spec, p, batch, sched, draw, grad);
    if (step == 0) first = loss;
    if (!(loss < prev)) ++increases;
    prev = loss;
    if (step < 200) adam_step(adam, p, grad);
  }
  o.check(increases == 0, std::to_string(increases) + " non-decreasing steps");
  const std::string base = "variance err " + fmt("%.4f", worst_var) + ", oracle " + fmt("%.1e", worst_oracle) +
                           ", fixed-batch loss " + fmt("%.4f", first) + " -> " + fmt("%.4f", prev);
  o.detail = base + (o.pass ? "" : "; " + o.detail);
  return o;
}

// ---------------------------------------------------------------------------

EncodeConfig corpus_encode_config() {
  EncodeConfig c;
  c.rays = 128;
  c.n_coarse = 16;
  c.n_fine = 32;
  c.stage1_steps = 100;
  c.stage2_steps = 100;
  c.sdf_points = 512;
  return c;
}

struct TableOne {
  CacheManifest organ;
  ModelCheckpoint base;
  ModelCheckpoint finetuned;
  EvalReport base_report;
  EvalReport finetuned_report;
  double seconds = 0.0;
};

const TableOne& table_one() {
  static std::optional<TableOne> cached;
  if (cached) return *cached;
  const auto t0 = std::chrono::steady_clock::now();
  TableOne r;
  const EncodeConfig ec = corpus_encode_config();
  CacheOptions co;
  co.parallelism = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const auto generic = synth_corpus(g_work / "generic", kGenericCategories, 16, 1);
  const auto organ = synth_corpus(g_work / "organ", kOrganCategories, 16, 2);
  const CacheManifest generic_cache = build_latent_cache(generic, ec, g_work / "generic_cache", co);
  r.organ = build_latent_cache(organ, ec, g_work / "organ_cache", co);

  TrainConfig pre;
  pre.lr = 1e-4;
  pre.epochs = 200;
  pre.seed = 7;
  r.base = train(generic_cache, pre, std::nullopt, {.checkpoint_dir = {}, .on_epoch = {}, .description = "pretrained on generic shapes"}).checkpoint;
  r.base.model_id = "base";

  TrainConfig ft;
  ft.lr = 1e-5;
  ft.batch_size = 8;
  ft.epochs = 25;
  ft.seed = 7;
  r.finetuned = train(r.organ, ft, r.base, {.checkpoint_dir = {}, .on_epoch = {}, .description = "fine-tuned on organ shapes"}).checkpoint;
  r.finetuned.model_id = "finetuned";

  r.base_report = evaluate(r.base, r.organ, SplitName::Eval, 11);
  r.finetuned_report = evaluate(r.finetuned, r.organ, SplitName::Eval, 11);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  cached = std::move(r);
  return *cached;
}

Outcome criterion7() {
  Outcome o;
  const TableOne& t = table_one();
  const double base = t.base_report.mse, tuned = t.finetuned_report.mse;
  const double margin = (base - tuned) / base;
  o.check(margin >= 0.10, "relative margin " + fmt("%.3f", margin));
  o.check(t.seconds < 1800.0, "took " + fmt("%.0f", t.seconds) + " s");
  const std::string detail = "base " + fmt("%.4f", base) + ", fine-tuned " + fmt("%.4f", tuned) + ", margin " +
                             fmt("%.1f%%", 100.0 * margin) + ", n " + std::to_string(t.finetuned_report.n) + ", " +
                             fmt("%.0f", t.seconds) + " s";
  o.detail = detail + (o.pass ? "" : "; " + o.detail);
  return o;
}

Outcome criterion8() {
  Outcome o;
  const TableOne& t = table_one();
  std::map<std::string, Vec> centroid;
  std::map<std::string, int> count;
  for (const auto& rec : load_cached_latents(t.organ)) {
    const Vec v = Eigen::Map<const Vec>(rec.latent.values.data(), static_cast<Eigen::Index>(rec.latent.values.size()));
    auto [it, fresh] = centroid.try_emplace(rec.entry.category, Vec::Zero(v.size()));
    it->second += v;
    ++count[rec.entry.category];
  }
  for (auto& [cat, c] : centroid) c /= count[cat];

  int correct = 0, total = 0;
  std::string per_prompt;
  for (const std::string prompt : {"sphereoid", "curved_tube"}) {
    std::vector<std::uint64_t> seeds(20);
    Mat cond(kConditionDim, 20);
    for (int i = 0; i < 20; ++i) {
      seeds[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(i);
      cond.col(i) = embed_text(prompt).embedding;
    }
    SampleOptions opts;
    opts.steps = 100;
    const Mat z = sample_batch(t.finetuned.denoiser(), t.finetuned.spec.latent_dim, t.finetuned.schedule, cond,
                               seeds, opts);
    const Mat x = t.finetuned.stats.destandardize(z);
    int hits = 0;
    for (int i = 0; i < 20; ++i) {
      std::string best;
      double best_d = std::numeric_limits<double>::infinity();
      for (const auto& [cat, c] : centroid) {
        const double d = (x.col(i) - c).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = cat;
        }
      }
      hits += best == prompt;
    }
    correct += hits;
    total += 20;
    per_prompt += (per_prompt.empty() ? "" : ", ") + prompt + " " + std::to_string(hits) + "/20";
  }
  const double acc = static_cast<double>(correct) / total;
  o.check(acc >= 0.8, "accuracy " + fmt("%.3f", acc));
  o.detail = per_prompt + ", accuracy " + fmt("%.1f%%", 100.0 * acc) + (o.pass ? "" : "; " + o.detail);
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion9() {
  Outcome o;
  const fs::path root = g_work / "service";
  fs::remove_all(root);
  ServiceConfig config;
  config.model_dir = root / "models";
  config.output_dir = root / "generations";
  config.default_resolution = 32;
  config.port = 0;
  fs::create_directories(config.model_dir);
  save_checkpoint(config.model_dir / "organ.smfg", testing::octahedron_model("fine-tuned"));

  {
    Generator gen(config);
    GenerateRequest req;
    req.prompt = "a 3D model of a human liver";
    req.model_id = "organ";
    req.seed = 42;
    const auto a = gen.generate(req);
    const std::string first = read_file(*gen.file_path(a.file_name()));
    fs::remove(*gen.file_path(a.file_name()));
    const auto b = gen.generate(req);
    const std::string second = read_file(*gen.file_path(b.file_name()));
    o.check(a.id == b.id && first == second && !first.empty(), "generation not byte-identical");
    req.seed = 43;
    const auto c = gen.generate(req);
    o.check(read_file(*gen.file_path(c.file_name())) != first, "different seeds gave identical bytes");
  }

  Server server(config);
  const int port = server.bind();
  std::thread thread([&] { server.serve(); });
  httplib::Client cli("127.0.0.1", port);
  cli.set_read_timeout(120, 0);
  const std::string body = R"({"prompt":"a 3D model of a human liver","model_id":"organ","seed":42})";
  if (auto res = cli.Post("/api/generate", body, "application/json"); res && res->status == 200) {
    const Json j = Json::parse(res->body);
    auto file = cli.Get(j.at("file").get<std::string>());
    o.check(file && file->status == 200, "file download failed");
    if (file) {
      try {
        const TriangleMesh m = parse_ply(file->body);
        o.check(m.triangle_count() == j.at("stats").at("triangle_count").get<std::size_t>() && !m.empty(),
                "PLY triangle count mismatch");
      } catch (const std::exception& e) {
        o.check(false, std::string("PLY unparseable: ") + e.what());
      }
    }
  } else {
    o.check(false, "happy path status " + std::to_string(res ? res->status : -1));
  }
  const auto status_of = [&](const std::string& b) {
    auto res = cli.Post("/api/generate", b, "application/json");
    return res ? res->status : -1;
  };
  const int s404 = status_of(R"({"prompt":"x","model_id":"missing"})");
  const int s422 = status_of(R"({"prompt":42,"model_id":"organ"})");
  server.stop();
  thread.join();
  o.check(s404 == 404, "unknown model gave " + std::to_string(s404));
  o.check(s422 == 422, "invalid request gave " + std::to_string(s422));

  ServiceConfig tight = config;
  tight.timeout_ms = 1;
  save_checkpoint(config.model_dir / "slow.smfg", testing::octahedron_model("slow", 4, 512, 1000));
  Api api(tight);
  const HttpResponse slow = api.generate(R"({"prompt":"x","model_id":"slow","steps":1000})");
  o.check(slow.status == 504 && Json::parse(slow.body).value("retriable", false), "timeout gave " +
                                                                                     std::to_string(slow.status));
  o.detail = "identical bytes, PLY via HTTP, 404/422/504" + (o.pass ? "" : "; " + o.detail);
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // 0 means no runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  g_work = "acceptance_work";
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--work" && i + 1 < argc) {
      g_work = argv[++i];
    } else {
      only.insert(std::stoi(a));
    }
  }
  fs::remove_all(g_work);
  fs::create_directories(g_work);

  const std::vector<Criterion> criteria = {
      {1, "format round-trips", 10.0, criterion1},
      {2, "gradient suite", 60.0, criterion2},
      {3, "volume-rendering algebra", 0.0, criterion3},
      {4, "geometry oracle", 0.0, criterion4},
      {5, "encoder end-to-end", 600.0, criterion5},
      {6, "diffusion sanity", 0.0, criterion6},
      {7, "fine-tuned beats pretrained on organ eval split", 0.0, criterion7},
      {8, "prompt conditioning", 0.0, criterion8},
      {9, "service contract", 0.0, criterion9},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0 && s >= c.budget_s) {
      out.pass = false;
      out.detail += "; over the " + fmt("%.0f", c.budget_s) + " s budget";
    }
    failures += !out.pass;
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(),
                s);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
