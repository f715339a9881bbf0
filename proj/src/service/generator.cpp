// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "service/generator.hpp"

#include <algorithm>
#include <fstream>

#include "common/error.hpp"
#include "common/hash.hpp"
#include "common/rng.hpp"
#include "diffusion/sampler.hpp"
#include "encoder/decode.hpp"

namespace forge {

namespace fs = std::filesystem;

namespace {

std::uint64_t non_negative(const Json& v, const char* name) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
  fail(Errc::InvalidArgument, std::string(name) + " must be a non-negative integer");
}

bool valid_model_id(std::string_view id) {
  if (id.empty() || id.size() > 128) return false;
  return std::all_of(id.begin(), id.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '-' || c == '_' || c == '.';
  }) && id.front() != '.';
}

}  // namespace

GenerateRequest GenerateRequest::from_json(const Json& j) {
  if (!j.is_object()) fail(Errc::InvalidArgument, "request body must be a JSON object");
  GenerateRequest r;
  if (!j.contains("prompt") || !j.at("prompt").is_string()) fail(Errc::InvalidArgument, "prompt must be a string");
  if (!j.contains("model_id") || !j.at("model_id").is_string())
    fail(Errc::InvalidArgument, "model_id must be a string");
  r.prompt = j.at("prompt").get<std::string>();
  r.model_id = j.at("model_id").get<std::string>();
  if (r.prompt.size() > kMaxPromptLength)
    fail(Errc::InvalidArgument, "prompt longer than " + std::to_string(kMaxPromptLength) + " bytes");
  if (j.contains("seed") && !j.at("seed").is_null()) r.seed = non_negative(j.at("seed"), "seed");
  if (j.contains("steps") && !j.at("steps").is_null()) {
    const auto s = non_negative(j.at("steps"), "steps");
    if (s < 1 || s > 100000) fail(Errc::InvalidArgument, "steps must be >= 1");
    r.steps = static_cast<int>(s);
  }
  if (j.contains("grid_resolution") && !j.at("grid_resolution").is_null()) {
    const auto g = non_negative(j.at("grid_resolution"), "grid_resolution");
    if (g < 8 || g > 256) fail(Errc::InvalidArgument, "grid_resolution must be in [8, 256]");
    r.grid_resolution = static_cast<int>(g);
  }
  if (j.contains("output_format") && !j.at("output_format").is_null()) {
    if (!j.at("output_format").is_string()) fail(Errc::InvalidArgument, "output_format must be a string");
    try {
      r.format = parse_format_name(j.at("output_format").get<std::string>());
    } catch (const Error& e) {
      fail(Errc::InvalidArgument, e.what());
    }
  }
  return r;
}

Json GenerateRequest::to_json() const {
  Json j = {{"prompt", prompt}, {"model_id", model_id}, {"output_format", format_extension(format)}};
  if (seed) j["seed"] = *seed;
  if (steps) j["steps"] = *steps;
  if (grid_resolution) j["grid_resolution"] = *grid_resolution;
  return j;
}

std::string GenerateResult::file_name() const { return id + "." + std::string(format_extension(format)); }

Json GenerateResult::to_json() const {
  return {{"id", id},
          {"prompt", prompt},
          {"model_id", model_id},
          {"format", format_extension(format)},
          {"file", "/files/" + file_name()},
          {"stats",
           {{"triangle_count", triangle_count},
            {"elapsed_ms", elapsed_ms},
            {"steps", steps},
            {"seed", seed},
            {"grid_resolution", grid_resolution}}},
          {"created_at", created_at}};
}

GenerateResult GenerateResult::from_json(const Json& j) {
  GenerateResult r;
  r.id = j.at("id").get<std::string>();
  r.prompt = j.at("prompt").get<std::string>();
  r.model_id = j.at("model_id").get<std::string>();
  r.format = parse_format_name(j.at("format").get<std::string>());
  const auto& s = j.at("stats");
  r.triangle_count = s.at("triangle_count").get<std::size_t>();
  r.elapsed_ms = s.at("elapsed_ms").get<double>();
  r.steps = s.at("steps").get<int>();
  r.seed = s.at("seed").get<std::uint64_t>();
  r.grid_resolution = s.value("grid_resolution", 0);
  r.created_at = j.at("created_at").get<std::string>();
  return r;
}

Json ModelInfo::to_json() const {
  Json j = {{"model_id", model_id}, {"description", description}, {"created_at", created_at}};
  j["eval_mse"] = eval_mse ? Json(*eval_mse) : Json();
  return j;
}

std::shared_ptr<const ModelCheckpoint> ModelRegistry::get(const std::string& model_id) {
  if (!valid_model_id(model_id)) fail(Errc::UnknownModel, "unknown model '" + model_id + "'");
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(model_id); it != cache_.end()) return it->second;
  }
  const fs::path path = dir_ / (model_id + kCheckpointExtension);
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) fail(Errc::UnknownModel, "unknown model '" + model_id + "'");
  auto ck = std::make_shared<const ModelCheckpoint>(load_checkpoint(path));
  std::lock_guard lock(mutex_);
  return cache_.emplace(model_id, std::move(ck)).first->second;
}

std::vector<ModelInfo> ModelRegistry::list(std::vector<std::string>* warnings) const {
  std::vector<ModelInfo> out;
  std::error_code ec;
  if (!fs::is_directory(dir_, ec)) return out;
  std::vector<fs::path> files;
  for (const auto& f : fs::directory_iterator(dir_, ec))
    if (f.is_regular_file() && f.path().extension() == kCheckpointExtension) files.push_back(f.path());
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    try {
      const ModelCheckpoint ck = load_checkpoint(path);
      ModelInfo info{ck.model_id, ck.provenance.value("description", std::string()),
                     ck.provenance.value("created_at", std::string()), std::nullopt};
      if (ck.provenance.contains("eval_mse") && ck.provenance.at("eval_mse").is_number())
        info.eval_mse = ck.provenance.at("eval_mse").get<double>();
      out.push_back(std::move(info));
    } catch (const std::exception& e) {
      if (warnings) warnings->push_back(path.filename().string() + ": " + e.what());
    }
  }
  return out;
}

std::vector<std::string> ModelRegistry::loaded() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> ids;
  for (const auto& [id, ck] : cache_) ids.push_back(id);
  return ids;
}

std::string generation_id(const GenerateRequest& request, std::uint64_t seed, int steps, int resolution) {
  const Json key = {{"prompt", request.prompt},    {"model_id", request.model_id}, {"seed", seed},
                    {"steps", steps},              {"grid_resolution", resolution},
                    {"format", format_extension(request.format)}};
  return hex64(fnv1a64(canonical_dump(key)));
}

Generator::Generator(ServiceConfig config) : config_(std::move(config)), models_(config_.model_dir) {
  config_.check();
  fs::create_directories(config_.output_dir);
}

GenerateResult Generator::generate(const GenerateRequest& request) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto deadline = t0 + std::chrono::milliseconds(config_.timeout_ms);
  const auto expired = [&] { return std::chrono::steady_clock::now() > deadline; };
  if (request.prompt.size() > kMaxPromptLength) fail(Errc::InvalidArgument, "prompt too long");

  const auto model = models_.get(request.model_id);
  const int steps = request.steps.value_or(std::min(config_.default_steps, model->schedule.steps));
  if (steps < 1 || steps > model->schedule.steps)
    fail(Errc::InvalidArgument, "steps must be in [1, " + std::to_string(model->schedule.steps) + "]");
  const int resolution = request.grid_resolution.value_or(config_.default_resolution);
  const std::uint64_t seed = request.seed.value_or(0);

  GenerateResult result;
  result.id = generation_id(request, seed, steps, resolution);
  result.prompt = request.prompt;
  result.model_id = request.model_id;
  result.format = request.format;
  result.steps = steps;
  result.seed = seed;
  result.grid_resolution = resolution;

  SampleOptions opts;
  opts.steps = steps;
  opts.cancelled = expired;
  Vec latent;
  try {
    latent = sample(model->denoiser(), model->schedule, embed_text(request.prompt), model->stats,
                    derive_seed(seed, fnv1a64(result.id)), opts);
  } catch (const Error& e) {
    if (e.code() == Errc::Cancelled) fail(Errc::Timeout, "generation exceeded " + std::to_string(config_.timeout_ms) + " ms");
    throw;
  }
  const Latent lat{{latent.data(), latent.data() + latent.size()}, model->field.id()};
  const TriangleMesh mesh = latent_to_mesh(lat, model->field, resolution);
  if (expired()) fail(Errc::Timeout, "generation exceeded " + std::to_string(config_.timeout_ms) + " ms");

  const std::string bytes = write_mesh(mesh, request.format);
  const TriangleMesh check = parse_mesh(bytes, request.format);
  if (check.triangle_count() != mesh.triangle_count())
    fail(Errc::Internal, "written mesh does not re-parse to the same triangle count");
  write_file_atomic(config_.output_dir / result.file_name(), bytes);

  result.triangle_count = mesh.triangle_count();
  result.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  result.created_at = utc_timestamp();
  append_history(result);
  return result;
}

void Generator::append_history(const GenerateResult& result) {
  std::lock_guard lock(history_mutex_);
  std::ofstream out(config_.output_dir / "history.jsonl", std::ios::app | std::ios::binary);
  if (!out) fail(Errc::Io, "cannot append to generation history");
  out << result.to_json().dump() << '\n';
}

std::vector<GenerateResult> Generator::history(std::size_t limit) const {
  std::lock_guard lock(history_mutex_);
  std::vector<GenerateResult> all;
  std::ifstream in(config_.output_dir / "history.jsonl", std::ios::binary);
  std::string line;
  while (std::getline(in, line)) {
    try {
      all.push_back(GenerateResult::from_json(Json::parse(line)));
    } catch (const std::exception&) {
      // torn or foreign line
    }
  }
  std::reverse(all.begin(), all.end());
  if (all.size() > limit) all.resize(limit);
  return all;
}

std::optional<fs::path> Generator::file_path(std::string_view file_name) const {
  const auto dot = file_name.find('.');
  if (dot != 16 || file_name.find('.', dot + 1) != std::string_view::npos) return std::nullopt;
  const auto id = file_name.substr(0, dot);
  if (!std::all_of(id.begin(), id.end(), [](char c) { return std::isxdigit(static_cast<unsigned char>(c)) && !std::isupper(static_cast<unsigned char>(c)); }))
    return std::nullopt;
  try {
    parse_format_name(file_name.substr(dot + 1));
  } catch (const Error&) {
    return std::nullopt;
  }
  const fs::path path = config_.output_dir / std::string(file_name);
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) return std::nullopt;
  return path;
}

}  // namespace forge
