// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "common/io.hpp"
#include "dataset/cache.hpp"
#include "dataset/entry.hpp"
#include "dataset/synth.hpp"
#include "geometry/primitives.hpp"
#include "geometry/transform.hpp"
#include "mesh_io/formats.hpp"
#include "test_util.hpp"

namespace forge {
namespace {

namespace fs = std::filesystem;
using testing::error_code_of;

std::vector<DatasetEntry> fake_entries(const std::map<std::string, int>& counts) {
  std::vector<DatasetEntry> out;
  for (const auto& [cat, n] : counts)
    for (int i = 0; i < n; ++i) out.push_back({cat + "/" + std::to_string(i), cat, category_prompt(cat), "x.stl", {}});
  return out;
}

EncodeConfig tiny_encode() {
  EncodeConfig c;
  c.field.frequencies = 1;
  c.field.hidden = {8};
  c.rays = 16;
  c.n_coarse = 4;
  c.n_fine = 8;
  c.stage1_steps = 3;
  c.stage2_steps = 3;
  c.sdf_points = 32;
  return c;
}

TEST(Synth, UnitSphereoid) {
  SynthParams p;
  p.amplitude = 0.0;
  const TriangleMesh m = synth_shape("sphereoid", p, 1);
  for (const auto& v : m.vertices) EXPECT_NEAR(v.norm(), 1.0, 1e-6);
}

TEST(Synth, WatertightAndDeterministic) {
  std::vector<std::string> all = kOrganCategories;
  all.insert(all.end(), kGenericCategories.begin(), kGenericCategories.end());
  for (const auto& cat : all) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const SynthParams p = random_synth_params(cat, seed);
      const TriangleMesh m = synth_shape(cat, p, seed);
      const MeshReport r = validate(m);
      EXPECT_EQ(r.boundary_edges, 0u) << cat << " seed " << seed;
      EXPECT_EQ(r.nonmanifold_edges, 0u) << cat << " seed " << seed;
      EXPECT_EQ(r.degenerate_triangles, 0u) << cat << " seed " << seed;
      const Aabb b = bounds_of(m);
      EXPECT_TRUE(b.valid());
      EXPECT_TRUE(b.lo.allFinite() && b.hi.allFinite());
      EXPECT_NO_THROW(normalize_mesh(m));
      const TriangleMesh again = synth_shape(cat, p, seed);
      EXPECT_EQ(again.vertices, m.vertices);
      EXPECT_EQ(again.triangles, m.triangles);
    }
  }
}

TEST(Synth, Outward) {
  for (const auto& cat : kOrganCategories) {
    const TriangleMesh m = synth_shape(cat, random_synth_params(cat, 3), 3);
    double volume = 0.0;
    for (std::size_t t = 0; t < m.triangle_count(); ++t)
      volume += m.corner(t, 0).dot(m.corner(t, 1).cross(m.corner(t, 2)));
    EXPECT_GT(volume, 0.0) << cat;
  }
}

TEST(Synth, InvalidParams) {
  SynthParams p;
  p.radii = Vec3(0.2, 1, 1);
  EXPECT_EQ(error_code_of([&] { synth_shape("sphereoid", p, 1); }), Errc::InvalidParams);
  p = SynthParams{};
  p.minor_radius = 0.4;
  EXPECT_EQ(error_code_of([&] { synth_shape("curved_tube", p, 1); }), Errc::InvalidParams);
  p = SynthParams{};
  p.amplitude = 0.31;
  EXPECT_EQ(error_code_of([&] { synth_shape("lobed_blob", p, 1); }), Errc::InvalidParams);
  EXPECT_EQ(error_code_of([] { synth_shape("spleen", SynthParams{}, 1); }), Errc::InvalidParams);
}

TEST(Split, TenEntries) {
  const auto s = make_split(fake_entries({{"liver", 10}}), 1);
  EXPECT_EQ(s.train.size(), 8u);
  EXPECT_EQ(s.eval.size(), 1u);
  EXPECT_EQ(s.validation.size(), 1u);
}

TEST(Split, PaperCorpusSize) {
  const auto entries = fake_entries({{"aorta", 1000}, {"liver", 1200}, {"kidney", 1112}, {"heart", 277}});
  ASSERT_EQ(entries.size(), 3589u);
  const auto s = make_split(entries, 2);
  EXPECT_EQ(s.train.size(), 2871u);
  EXPECT_EQ(s.eval.size(), 359u);
  EXPECT_EQ(s.validation.size(), 359u);
}

TEST(Split, PartitionStratifiedDeterministic) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::map<std::string, int> counts = {{"a", 3 + static_cast<int>(seed)}, {"b", 17}, {"c", 41 - static_cast<int>(seed)}};
    const auto entries = fake_entries(counts);
    const auto s = make_split(entries, seed);
    std::set<std::string> all;
    for (const auto* part : {&s.train, &s.eval, &s.validation})
      for (const auto& id : *part) EXPECT_TRUE(all.insert(id).second) << "duplicate " << id;
    EXPECT_EQ(all.size(), entries.size());
    EXPECT_FALSE(s.eval.empty());
    EXPECT_FALSE(s.validation.empty());
    for (const auto& [cat, n] : counts) {
      const auto in_cat = [&](const std::vector<std::string>& ids) {
        return std::count_if(ids.begin(), ids.end(), [&](const std::string& id) { return id.rfind(cat + "/", 0) == 0; });
      };
      EXPECT_LE(std::abs(in_cat(s.eval) - 0.1 * n), 1.0) << cat;
      EXPECT_LE(std::abs(in_cat(s.validation) - 0.1 * n), 1.0) << cat;
      EXPECT_LE(std::abs(in_cat(s.train) - 0.8 * n), 1.5) << cat;
    }
    const auto again = make_split(entries, seed);
    EXPECT_EQ(again.train, s.train);
    EXPECT_EQ(again.eval, s.eval);
    EXPECT_EQ(again.validation, s.validation);
  }
}

TEST(Split, Errors) {
  EXPECT_EQ(error_code_of([] { make_split(fake_entries({{"a", 2}}), 1); }), Errc::TooFew);
  auto dup = fake_entries({{"a", 4}});
  dup[1].id = dup[0].id;
  EXPECT_EQ(error_code_of([&] { make_split(dup, 1); }), Errc::InvalidArgument);
}

TEST(Ingest, CountsCategoriesAndSkips) {
  testing::TempDir dir("ingest");
  fs::create_directories(dir / "liver");
  fs::create_directories(dir / "heart");
  const std::string good = write_stl(to_soup(make_cube()));
  write_file_atomic(dir / "liver/a.stl", good);
  write_file_atomic(dir / "liver/b.obj", write_obj(make_cube()));
  write_file_atomic(dir / "heart/c.stl", good);
  write_file_atomic(dir / "heart/broken.stl", good.substr(0, 200));
  write_file_atomic(dir / "heart/notes.txt", "ignore me");
  const IngestResult r = ingest_dir(dir.path());
  ASSERT_EQ(r.entries.size(), 3u);
  std::set<std::string> cats;
  for (const auto& e : r.entries) {
    cats.insert(e.category);
    EXPECT_EQ(e.prompt, "a 3D model of a human " + e.category);
  }
  EXPECT_EQ(cats, (std::set<std::string>{"liver", "heart"}));
  ASSERT_EQ(r.skipped.size(), 1u);
  EXPECT_EQ(r.skipped[0].path.filename(), "broken.stl");
}

TEST(Ingest, EmptyCorpus) {
  testing::TempDir dir("ingest-empty");
  fs::create_directories(dir / "liver");
  EXPECT_EQ(error_code_of([&] { ingest_dir(dir.path()); }), Errc::EmptyCorpus);
}

TEST(Ingest, SynthCorpusRoundTrip) {
  testing::TempDir dir("synth-corpus");
  const auto made = synth_corpus(dir.path(), {"bilobe", "torus"}, 2, 7);
  ASSERT_EQ(made.size(), 4u);
  const IngestResult r = ingest_dir(dir.path());
  ASSERT_EQ(r.entries.size(), 4u);
  EXPECT_TRUE(r.skipped.empty());
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(r.entries[i].id, made[i].id);
  EXPECT_EQ(DatasetEntry::from_json(made[0].to_json()).mesh_path, made[0].mesh_path);
}

TEST(Cache, HashChangesWithEveryField) {
  const EncodeConfig base = tiny_encode();
  std::vector<EncodeConfig> variants(10, base);
  variants[0].rays += 1;
  variants[1].n_coarse += 1;
  variants[2].n_fine += 1;
  variants[3].stage1_steps += 1;
  variants[4].stage2_steps += 1;
  variants[5].sdf_points += 1;
  variants[6].lambda_sdf += 0.5;
  variants[7].lr *= 3;
  variants[8].seed += 1;
  variants[9].field.hidden = {9};
  std::set<std::string> hashes = {base.hash()};
  for (const auto& v : variants) EXPECT_TRUE(hashes.insert(v.hash()).second);
  EXPECT_EQ(tiny_encode().hash(), base.hash());
}

TEST(Cache, BuildReuseAndInvalidate) {
  testing::TempDir dir("cache");
  auto entries = synth_corpus(dir / "corpus", {"sphereoid", "bilobe"}, 2, 3);
  const fs::path cache = dir / "cache";
  CacheStats stats;
  const CacheManifest first = build_latent_cache(entries, tiny_encode(), cache, {}, &stats);
  EXPECT_EQ(stats.encoded, 4u);
  EXPECT_EQ(stats.reused, 0u);
  ASSERT_EQ(first.entries.size(), 4u);
  int files = 0;
  for (const auto& f : fs::directory_iterator(cache)) files += f.path().extension() == ".smfg";
  EXPECT_EQ(files, 4);
  EXPECT_TRUE(fs::exists(cache / kManifestName));
  const auto records = load_cached_latents(load_manifest(cache));
  ASSERT_EQ(records.size(), 4u);
  EXPECT_EQ(records[0].latent.values.size(), tiny_encode().field.param_count());

  CacheStats again;
  CacheOptions opts;
  opts.parallelism = 2;
  build_latent_cache(entries, tiny_encode(), cache, opts, &again);
  EXPECT_EQ(again.encoded, 0u);
  EXPECT_EQ(again.reused, 4u);

  // Rewriting one mesh with different geometry re-encodes only that entry.
  save_mesh(load_mesh(entries[0].mesh_path), entries[3].mesh_path);
  CacheStats touched;
  build_latent_cache(entries, tiny_encode(), cache, {}, &touched);
  EXPECT_EQ(touched.encoded, 1u);
  EXPECT_EQ(touched.reused, 3u);

  EncodeConfig changed = tiny_encode();
  changed.rays = 24;
  CacheStats rebuilt;
  const CacheManifest m2 = build_latent_cache(entries, changed, cache, {}, &rebuilt);
  EXPECT_EQ(rebuilt.encoded, 4u);
  EXPECT_EQ(rebuilt.reused, 0u);
  EXPECT_EQ(m2.config_hash, changed.hash());
}

TEST(Cache, StaleAndFailures) {
  testing::TempDir dir("cache-stale");
  auto entries = synth_corpus(dir / "corpus", {"sphere"}, 2, 4);
  entries.push_back({"sphere/missing", "sphere", category_prompt("sphere"), dir / "corpus/nope.stl", {}});
  const fs::path cache = dir / "cache";
  CacheStats stats;
  const CacheManifest m = build_latent_cache(entries, tiny_encode(), cache, {}, &stats);
  EXPECT_EQ(stats.failed, 1u);
  ASSERT_EQ(m.failures.size(), 1u);
  EXPECT_EQ(m.failures[0].first, "sphere/missing");
  EXPECT_EQ(m.entries.size(), 2u);

  fs::remove(*m.entries[0].latent_path);
  EXPECT_EQ(error_code_of([&] { load_cached_latents(load_manifest(cache)); }), Errc::StaleCache);
  CacheManifest empty = m;
  empty.entries.clear();
  empty.entry_hashes.clear();
  EXPECT_EQ(error_code_of([&] { load_cached_latents(empty); }), Errc::EmptyCorpus);
}

TEST(Cache, LatentFileRoundTrip) {
  testing::TempDir dir("latent");
  const FieldSpec spec = tiny_encode().field;
  Latent l{std::vector<double>(spec.param_count()), spec.id()};
  for (std::size_t i = 0; i < l.values.size(); ++i) l.values[i] = 0.25 * static_cast<double>(i) - 3.0;
  save_latent(dir / "x.smfg", l, spec, Json::object());
  FieldSpec back_spec;
  const Latent back = load_latent(dir / "x.smfg", &back_spec);
  EXPECT_EQ(back.values, l.values);
  EXPECT_EQ(back_spec, spec);
}

}  // namespace
}  // namespace forge
