// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dataset/cache.hpp"
#include "pipeline/checkpoint.hpp"

namespace forge {

struct TrainConfig {
  double lr = 1e-4;  // use 1e-5 when fine-tuning
  int batch_size = 8;
  int epochs = 25;
  std::uint64_t seed = 0;
  std::uint64_t split_seed = 0;
  int schedule_steps = 1000;
  double beta_min = 1e-4;
  double beta_max = 0.02;
  DenoiserSpec denoiser;  // latent_dim is taken from the corpus
  double cond_dropout = 0.1;
  int eval_passes = 8;

  void check() const;
  Json to_json() const;
  static TrainConfig from_json(const Json& j);
  std::string hash() const;
};

struct EpochRecord {
  int epoch = 0;
  double train_mse = 0.0;  // mean training-step loss over the epoch
  double eval_mse = 0.0;   // fixed-seed mse_on_latents on the eval split
};

struct TrainOptions {
  // Per-epoch checkpoints go here as epoch_NNN.smfg when set.
  std::optional<std::filesystem::path> checkpoint_dir;
  std::function<void(const EpochRecord&)> on_epoch;
  std::string description;
};

struct TrainResult {
  ModelCheckpoint checkpoint;
  std::vector<EpochRecord> history;
};

// A starting checkpoint makes this fine-tuning: its weights and schedule are
// kept and LatentStats are recomputed on the new training split.
TrainResult train(const CacheManifest& corpus, const TrainConfig& config,
                  const std::optional<ModelCheckpoint>& start = std::nullopt, const TrainOptions& options = {});

std::string history_csv(const std::vector<EpochRecord>& history);

// Standardized batch for the given ids, in order.
DiffusionBatch make_diffusion_batch(const std::vector<LatentRecord>& records, const std::vector<std::size_t>& rows,
                                    const LatentStats& stats);

// Index rows of `records` whose ids appear in `ids`, in `ids` order.
std::vector<std::size_t> select_rows(const std::vector<LatentRecord>& records, const std::vector<std::string>& ids);

}  // namespace forge
