// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "common/io.hpp"

namespace forge {

struct DatasetEntry {
  std::string id;
  std::string category;
  std::string prompt;
  std::filesystem::path mesh_path;
  std::optional<std::filesystem::path> latent_path;

  Json to_json() const;
  static DatasetEntry from_json(const Json& j);
};

std::string category_prompt(std::string_view category);

struct SkippedFile {
  std::filesystem::path path;
  std::string reason;
};

struct IngestResult {
  std::vector<DatasetEntry> entries;
  std::vector<SkippedFile> skipped;
};

// One subdirectory per category holding .stl/.obj/.ply files.
IngestResult ingest_dir(const std::filesystem::path& root);

// Writes `per_category` seeded shapes per category under root/<category>/
// as binary STL and returns the entries.
std::vector<DatasetEntry> synth_corpus(const std::filesystem::path& root, const std::vector<std::string>& categories,
                                       int per_category, std::uint64_t seed);

struct SplitAssignment {
  std::vector<std::string> train;
  std::vector<std::string> eval;
  std::vector<std::string> validation;
};

SplitAssignment make_split(const std::vector<DatasetEntry>& entries, std::uint64_t seed);

}  // namespace forge
