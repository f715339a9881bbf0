// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "common/io.hpp"
#include "diffusion/denoiser.hpp"
#include "diffusion/objective.hpp"
#include "diffusion/schedule.hpp"
#include "encoder/field.hpp"

namespace forge {

inline constexpr int kCheckpointFormat = 1;

struct ModelCheckpoint {
  std::string model_id;  // file stem when loaded from disk
  DenoiserSpec spec;
  std::vector<double> params;
  NoiseSchedule schedule;
  LatentStats stats;
  FieldSpec field;
  // config hashes, epoch, loss history, description, created_at, eval_mse
  Json provenance = Json::object();

  DenoiseFn denoiser() const { return denoiser_fn(spec, params); }
};

std::string encode_checkpoint(const ModelCheckpoint& checkpoint);
ModelCheckpoint decode_checkpoint(std::string_view bytes);

void save_checkpoint(const std::filesystem::path& path, const ModelCheckpoint& checkpoint);
ModelCheckpoint load_checkpoint(const std::filesystem::path& path);

inline constexpr const char* kCheckpointExtension = ".smfg";

}  // namespace forge
