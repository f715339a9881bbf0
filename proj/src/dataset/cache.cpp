// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "dataset/cache.hpp"

#include <atomic>
#include <map>
#include <mutex>
#include <thread>

#include "common/container.hpp"
#include "common/error.hpp"
#include "common/hash.hpp"
#include "common/io.hpp"
#include "mesh_io/formats.hpp"

namespace forge {

namespace fs = std::filesystem;

namespace {

std::string latent_file_name(const std::string& id) {
  std::string safe;
  for (char c : id) safe += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return safe + "-" + hex64(fnv1a64(id)).substr(0, 8) + ".smfg";
}

std::string mesh_content_hash(const fs::path& path) {
  try {
    return hex64(fnv1a64(read_file(path)));
  } catch (const Error&) {
    return {};
  }
}

}  // namespace

Json CacheManifest::to_json() const {
  Json list = Json::array();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    list.push_back({{"id", e.id},
                    {"category", e.category},
                    {"prompt", e.prompt},
                    {"mesh_path", e.mesh_path.string()},
                    {"latent_file", e.latent_path ? e.latent_path->filename().string() : std::string()},
                    {"config_hash", entry_hashes[i]},
                    {"mesh_hash", i < mesh_hashes.size() ? mesh_hashes[i] : std::string()}});
  }
  Json fails = Json::array();
  for (const auto& [id, reason] : failures) fails.push_back({{"id", id}, {"reason", reason}});
  return {{"config_hash", config_hash}, {"field_spec", field.to_json()}, {"entries", list}, {"failures", fails}};
}

CacheManifest CacheManifest::from_json(const Json& j, const fs::path& base) {
  CacheManifest m;
  try {
    m.config_hash = j.at("config_hash").get<std::string>();
    m.field = FieldSpec::from_json(j.at("field_spec"));
    for (const auto& e : j.at("entries")) {
      DatasetEntry entry;
      entry.id = e.at("id").get<std::string>();
      entry.category = e.at("category").get<std::string>();
      entry.prompt = e.at("prompt").get<std::string>();
      entry.mesh_path = e.value("mesh_path", std::string());
      const auto file = e.value("latent_file", std::string());
      if (!file.empty()) entry.latent_path = base / file;
      m.entries.push_back(std::move(entry));
      m.entry_hashes.push_back(e.value("config_hash", std::string()));
      m.mesh_hashes.push_back(e.value("mesh_hash", std::string()));
    }
    for (const auto& f : j.value("failures", Json::array()))
      m.failures.emplace_back(f.at("id").get<std::string>(), f.at("reason").get<std::string>());
  } catch (const Json::exception& e) {
    fail(Errc::InvalidArgument, std::string("malformed cache manifest: ") + e.what());
  }
  return m;
}

void save_latent(const fs::path& path, const Latent& latent, const FieldSpec& spec, const Json& meta) {
  Container c;
  c.meta = meta;
  c.meta["kind"] = "latent";
  c.meta["field_spec"] = spec.to_json();
  c.add("latent", latent.values);
  write_container(path, c);
}

Latent load_latent(const fs::path& path, FieldSpec* spec) {
  const Container c = read_container(path);
  if (c.meta.value("kind", std::string()) != "latent") fail(Errc::InvalidArgument, path.string() + " is not a latent file");
  const FieldSpec fs = FieldSpec::from_json(c.meta.at("field_spec"));
  Latent latent{c.tensor("latent").values, fs.id()};
  if (latent.values.size() != fs.param_count())
    fail(Errc::ShapeMismatch, path.string() + ": latent size does not match its field spec");
  if (spec) *spec = fs;
  return latent;
}

CacheManifest load_manifest(const fs::path& cache_dir) {
  return CacheManifest::from_json(read_json_file(cache_dir / kManifestName), cache_dir);
}

CacheManifest build_latent_cache(const std::vector<DatasetEntry>& entries, const EncodeConfig& config,
                                 const fs::path& cache_dir, const CacheOptions& options, CacheStats* stats) {
  config.check();
  fs::create_directories(cache_dir);
  const std::string hash = config.hash();

  // id -> (config hash, mesh hash) of the cached latent
  std::map<std::string, std::pair<std::string, std::string>> previous;
  if (fs::exists(cache_dir / kManifestName)) {
    try {
      const CacheManifest old = load_manifest(cache_dir);
      for (std::size_t i = 0; i < old.entries.size(); ++i)
        if (old.entries[i].latent_path) previous[old.entries[i].id] = {old.entry_hashes[i], old.mesh_hashes[i]};
    } catch (const Error&) {
      // unreadable manifest: rebuild everything
    }
  }

  CacheManifest manifest;
  manifest.config_hash = hash;
  manifest.field = config.field;
  manifest.entries = entries;
  manifest.entry_hashes.assign(entries.size(), hash);
  manifest.mesh_hashes.assign(entries.size(), std::string());
  std::vector<std::string> errors(entries.size());
  std::vector<char> reused(entries.size(), 0);

  std::mutex log_mutex;
  const auto log = [&](const std::string& line) {
    if (!options.log) return;
    std::lock_guard lock(log_mutex);
    options.log(line);
  };

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      const auto& e = entries[i];
      const fs::path file = cache_dir / latent_file_name(e.id);
      manifest.entries[i].latent_path = file;
      const std::string mesh_hash = mesh_content_hash(e.mesh_path);
      manifest.mesh_hashes[i] = mesh_hash;
      const auto it = previous.find(e.id);
      if (it != previous.end() && it->second.first == hash && !mesh_hash.empty() && it->second.second == mesh_hash &&
          fs::exists(file)) {
        reused[i] = 1;
        continue;
      }
      try {
        const EncodeResult r = encode_mesh(load_mesh(e.mesh_path), config, {.compute_stf = false, .cancelled = {}});
        save_latent(file, r.latent, config.field,
                    {{"id", e.id}, {"category", e.category}, {"prompt", e.prompt}, {"config_hash", hash},
                     {"report", r.report.to_json()}});
        log("encoded " + e.id + " in " + std::to_string(static_cast<long long>(r.report.elapsed_ms)) + " ms");
      } catch (const std::exception& ex) {
        errors[i] = ex.what();
        log("failed " + e.id + ": " + ex.what());
      }
    }
  };
  const int threads = std::max(1, options.parallelism);
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  CacheStats s;
  CacheManifest out;
  out.config_hash = hash;
  out.field = config.field;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!errors[i].empty()) {
      out.failures.emplace_back(entries[i].id, errors[i]);
      ++s.failed;
      continue;
    }
    out.entries.push_back(manifest.entries[i]);
    out.entry_hashes.push_back(hash);
    out.mesh_hashes.push_back(manifest.mesh_hashes[i]);
    ++(reused[i] ? s.reused : s.encoded);
  }
  write_json_file(cache_dir / kManifestName, out.to_json());
  if (stats) *stats = s;
  return out;
}

std::vector<LatentRecord> load_cached_latents(const CacheManifest& manifest) {
  std::vector<LatentRecord> records;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const auto& e = manifest.entries[i];
    if (manifest.entry_hashes[i] != manifest.config_hash)
      fail(Errc::StaleCache, "latent for '" + e.id + "' was encoded with a different config");
    if (!e.latent_path || !fs::exists(*e.latent_path))
      fail(Errc::StaleCache, "latent for '" + e.id + "' is missing; rebuild the cache");
    FieldSpec spec;
    Latent latent = load_latent(*e.latent_path, &spec);
    if (!(spec == manifest.field)) fail(Errc::StaleCache, "latent for '" + e.id + "' has a different field spec");
    records.push_back({e, std::move(latent)});
  }
  if (records.empty()) fail(Errc::EmptyCorpus, "cache manifest lists no latents");
  return records;
}

}  // namespace forge
