// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "dataset/entry.hpp"
#include "encoder/encode.hpp"

namespace forge {

struct CacheManifest {
  std::string config_hash;
  FieldSpec field;
  std::vector<DatasetEntry> entries;                 // latent_path set for every encoded entry
  std::vector<std::string> entry_hashes;             // config hash each entry was encoded with
  std::vector<std::string> mesh_hashes;              // content hash of the mesh file; may be empty
  std::vector<std::pair<std::string, std::string>> failures;  // (id, reason)

  Json to_json() const;
  static CacheManifest from_json(const Json& j, const std::filesystem::path& base);
};

struct CacheStats {
  std::size_t encoded = 0;
  std::size_t reused = 0;
  std::size_t failed = 0;
};

struct CacheOptions {
  int parallelism = 1;
  std::function<void(const std::string& line)> log;
};

inline constexpr const char* kManifestName = "manifest.json";

// Encodes every entry whose cached latent is missing or was produced with a
// different config; writes cache_dir/manifest.json.
CacheManifest build_latent_cache(const std::vector<DatasetEntry>& entries, const EncodeConfig& config,
                                 const std::filesystem::path& cache_dir, const CacheOptions& options = {},
                                 CacheStats* stats = nullptr);

CacheManifest load_manifest(const std::filesystem::path& cache_dir);

struct LatentRecord {
  DatasetEntry entry;
  Latent latent;
};

// Throws StaleCache when an entry's latent is missing or was encoded with a
// config other than the manifest's.
std::vector<LatentRecord> load_cached_latents(const CacheManifest& manifest);

void save_latent(const std::filesystem::path& path, const Latent& latent, const FieldSpec& spec, const Json& meta);
Latent load_latent(const std::filesystem::path& path, FieldSpec* spec = nullptr);

}  // namespace forge
