// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "service/config.hpp"

#include <charconv>
#include <cstdlib>

#include "common/error.hpp"

namespace forge {

namespace {

int parse_int(const std::string& name, const std::string& text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    fail(Errc::InvalidArgument, name + " must be an integer, got '" + text + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = std::min(text.find(',', start), text.size());
    std::string item = text.substr(start, comma - start);
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    start = comma + 1;
  }
  return out;
}

}  // namespace

void ServiceConfig::check() const {
  if (port < 0 || port > 65535) fail(Errc::InvalidArgument, "port must be in [0, 65535]");
  if (default_steps < 1) fail(Errc::InvalidArgument, "default_steps must be >= 1");
  if (default_resolution < 8 || default_resolution > 256)
    fail(Errc::InvalidArgument, "default_resolution must be in [8, 256]");
  if (timeout_ms < 1) fail(Errc::InvalidArgument, "timeout_ms must be >= 1");
}

Json ServiceConfig::to_json() const {
  return {{"model_dir", model_dir.string()},   {"output_dir", output_dir.string()},
          {"host", host},                      {"port", port},
          {"cors_origins", cors_origins},      {"default_steps", default_steps},
          {"default_resolution", default_resolution}, {"timeout_ms", timeout_ms}};
}

ServiceConfig ServiceConfig::from_json(const Json& j) {
  ServiceConfig c;
  try {
    c.model_dir = j.value("model_dir", c.model_dir.string());
    c.output_dir = j.value("output_dir", c.output_dir.string());
    c.host = j.value("host", c.host);
    c.port = j.value("port", c.port);
    c.cors_origins = j.value("cors_origins", c.cors_origins);
    c.default_steps = j.value("default_steps", c.default_steps);
    c.default_resolution = j.value("default_resolution", c.default_resolution);
    c.timeout_ms = j.value("timeout_ms", c.timeout_ms);
  } catch (const Json::exception& e) {
    fail(Errc::InvalidArgument, std::string("invalid service config: ") + e.what());
  }
  c.check();
  return c;
}

void ServiceConfig::apply_env(const std::function<std::optional<std::string>(const char*)>& getenv) {
  if (auto v = getenv("FORGE_MODEL_DIR")) model_dir = *v;
  if (auto v = getenv("FORGE_OUTPUT_DIR")) output_dir = *v;
  if (auto v = getenv("FORGE_HOST")) host = *v;
  if (auto v = getenv("FORGE_PORT")) port = parse_int("FORGE_PORT", *v);
  if (auto v = getenv("FORGE_CORS_ORIGINS")) cors_origins = split_list(*v);
  if (auto v = getenv("FORGE_DEFAULT_STEPS")) default_steps = parse_int("FORGE_DEFAULT_STEPS", *v);
  if (auto v = getenv("FORGE_DEFAULT_RESOLUTION")) default_resolution = parse_int("FORGE_DEFAULT_RESOLUTION", *v);
  if (auto v = getenv("FORGE_TIMEOUT_MS")) timeout_ms = parse_int("FORGE_TIMEOUT_MS", *v);
  check();
}

void ServiceConfig::apply_env() {
  apply_env([](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (!v) return std::nullopt;
    return std::string(v);
  });
}

}  // namespace forge
