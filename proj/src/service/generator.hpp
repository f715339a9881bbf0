// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "mesh_io/formats.hpp"
#include "pipeline/checkpoint.hpp"
#include "service/config.hpp"

namespace forge {

inline constexpr std::size_t kMaxPromptLength = 1000;
inline constexpr std::size_t kHistoryLimit = 100;

struct GenerateRequest {
  std::string prompt;
  std::string model_id;
  std::optional<std::uint64_t> seed;
  std::optional<int> steps;
  std::optional<int> grid_resolution;
  MeshFormat format = MeshFormat::Ply;

  // Throws InvalidArgument on schema violations.
  static GenerateRequest from_json(const Json& j);
  Json to_json() const;
};

struct GenerateResult {
  std::string id;
  std::string prompt;
  std::string model_id;
  MeshFormat format = MeshFormat::Ply;
  std::size_t triangle_count = 0;
  double elapsed_ms = 0.0;
  int steps = 0;
  std::uint64_t seed = 0;
  int grid_resolution = 0;
  std::string created_at;

  std::string file_name() const;
  Json to_json() const;
  static GenerateResult from_json(const Json& j);
};

struct ModelInfo {
  std::string model_id;
  std::string description;
  std::string created_at;
  std::optional<double> eval_mse;

  Json to_json() const;
};

// Checkpoints under one directory, loaded lazily and kept immutable.
class ModelRegistry {
 public:
  explicit ModelRegistry(std::filesystem::path dir) : dir_(std::move(dir)) {}

  // Throws UnknownModel when no such checkpoint exists.
  std::shared_ptr<const ModelCheckpoint> get(const std::string& model_id);
  // Unreadable checkpoints are omitted; `warnings` collects why.
  std::vector<ModelInfo> list(std::vector<std::string>* warnings = nullptr) const;
  std::vector<std::string> loaded() const;

 private:
  std::filesystem::path dir_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const ModelCheckpoint>> cache_;
};

std::string generation_id(const GenerateRequest& request, std::uint64_t seed, int steps, int resolution);

class Generator {
 public:
  explicit Generator(ServiceConfig config);

  // prompt -> condition -> sample -> mesh -> file. Throws UnknownModel,
  // InvalidArgument, EmptyReconstruction or Timeout.
  GenerateResult generate(const GenerateRequest& request);

  // Newest first, at most `limit` entries.
  std::vector<GenerateResult> history(std::size_t limit = kHistoryLimit) const;

  std::optional<std::filesystem::path> file_path(std::string_view file_name) const;

  ModelRegistry& models() { return models_; }
  const ServiceConfig& config() const { return config_; }

 private:
  void append_history(const GenerateResult& result);

  ServiceConfig config_;
  ModelRegistry models_;
  mutable std::mutex history_mutex_;
};

}  // namespace forge
