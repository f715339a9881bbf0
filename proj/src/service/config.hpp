// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "common/io.hpp"

namespace forge {

struct ServiceConfig {
  std::filesystem::path model_dir = "models";
  std::filesystem::path output_dir = "generations";
  std::string host = "127.0.0.1";
  int port = 8080;
  std::vector<std::string> cors_origins = {"http://localhost:5173"};
  int default_steps = 100;
  int default_resolution = 64;
  int timeout_ms = 60000;

  void check() const;
  Json to_json() const;
  static ServiceConfig from_json(const Json& j);

  // FORGE_MODEL_DIR, FORGE_OUTPUT_DIR, FORGE_HOST, FORGE_PORT,
  // FORGE_CORS_ORIGINS (comma separated), FORGE_DEFAULT_STEPS,
  // FORGE_DEFAULT_RESOLUTION, FORGE_TIMEOUT_MS.
  void apply_env(const std::function<std::optional<std::string>(const char*)>& getenv);
  void apply_env();
};

}  // namespace forge
