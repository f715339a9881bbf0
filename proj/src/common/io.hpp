// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

namespace forge {

using Json = nlohmann::json;

std::string read_file(const std::filesystem::path& path);

// Writes to a unique sibling temp file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& value);

// Canonical serialization (sorted keys, round-trippable doubles) for hashing.
std::string canonical_dump(const Json& value);

// RFC 3339 UTC timestamp of the current time.
std::string utc_timestamp();

}  // namespace forge
