// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "dataset/cache.hpp"
#include "pipeline/checkpoint.hpp"

namespace forge {

enum class SplitName { Train, Eval, Validation };

SplitName parse_split_name(std::string_view name);
std::string_view split_name(SplitName split);

struct EvalReport {
  std::string model_id;
  std::string split;
  double mse = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;

  Json to_json() const;
  static EvalReport from_json(const Json& j);
};

EvalReport evaluate(const ModelCheckpoint& checkpoint, const CacheManifest& corpus, SplitName split,
                    std::uint64_t seed, std::uint64_t split_seed = 0, int passes = 8);

struct ComparisonRow {
  std::string model;
  double mse = 0.0;
};

// Rows sorted by ascending MSE, ties by model id.
std::vector<ComparisonRow> compare_reports(const std::vector<EvalReport>& reports);
std::string comparison_text(const std::vector<ComparisonRow>& rows);
std::string comparison_csv(const std::vector<ComparisonRow>& rows);

}  // namespace forge
