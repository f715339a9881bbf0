// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "pipeline/checkpoint.hpp"

#include <cmath>

#include "common/container.hpp"
#include "common/error.hpp"

namespace forge {

namespace {

std::vector<double> to_vector(const Vec& v) { return {v.data(), v.data() + v.size()}; }

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

}  // namespace

std::string encode_checkpoint(const ModelCheckpoint& ck) {
  if (ck.params.size() != ck.spec.param_count()) fail(Errc::ShapeMismatch, "checkpoint params do not match spec");
  if (ck.stats.mean.size() != ck.spec.latent_dim || ck.stats.std.size() != ck.spec.latent_dim)
    fail(Errc::ShapeMismatch, "latent stats do not match the denoiser");
  for (double v : ck.params)
    if (!std::isfinite(v)) fail(Errc::NonFiniteGradient, "refusing to save non-finite parameters");
  Container c;
  c.meta = {{"kind", "model"},
            {"format", kCheckpointFormat},
            {"denoiser", ck.spec.to_json()},
            {"schedule", ck.schedule.to_json()},
            {"field_spec", ck.field.to_json()},
            {"provenance", ck.provenance}};
  c.add("denoiser", ck.params);
  c.add("stats.mean", to_vector(ck.stats.mean));
  c.add("stats.std", to_vector(ck.stats.std));
  return encode_container(c);
}

ModelCheckpoint decode_checkpoint(std::string_view bytes) {
  const Container c = decode_container(bytes);
  ModelCheckpoint ck;
  try {
    if (c.meta.value("kind", std::string()) != "model") fail(Errc::InvalidArgument, "container is not a model checkpoint");
    const int format = c.meta.at("format").get<int>();
    if (format != kCheckpointFormat)
      fail(Errc::VersionUnsupported, "checkpoint format " + std::to_string(format) + " is not supported");
    ck.spec = DenoiserSpec::from_json(c.meta.at("denoiser"));
    ck.schedule = NoiseSchedule::from_json(c.meta.at("schedule"));
    ck.field = FieldSpec::from_json(c.meta.at("field_spec"));
    ck.provenance = c.meta.value("provenance", Json::object());
  } catch (const Json::exception& e) {
    fail(Errc::InvalidArgument, std::string("checkpoint header incomplete: ") + e.what());
  }
  ck.params = c.tensor("denoiser").values;
  ck.stats.mean = to_vec(c.tensor("stats.mean").values);
  ck.stats.std = to_vec(c.tensor("stats.std").values);
  if (ck.params.size() != ck.spec.param_count()) fail(Errc::ShapeMismatch, "checkpoint params do not match spec");
  if (ck.stats.mean.size() != ck.spec.latent_dim || ck.stats.std.size() != ck.spec.latent_dim)
    fail(Errc::ShapeMismatch, "latent stats do not match the denoiser");
  if (static_cast<std::size_t>(ck.spec.latent_dim) != ck.field.param_count())
    fail(Errc::ShapeMismatch, "denoiser latent size does not match the field spec");
  return ck;
}

void save_checkpoint(const std::filesystem::path& path, const ModelCheckpoint& ck) {
  write_file_atomic(path, encode_checkpoint(ck));
}

ModelCheckpoint load_checkpoint(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  ModelCheckpoint ck;
  try {
    ck = decode_checkpoint(bytes);
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.what());
  }
  ck.model_id = path.stem().string();
  return ck;
}

}  // namespace forge
