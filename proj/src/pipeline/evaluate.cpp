// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "pipeline/evaluate.hpp"

#include <algorithm>
#include <cstdio>

#include "common/error.hpp"
#include "common/numfmt.hpp"
#include "pipeline/train.hpp"

namespace forge {

SplitName parse_split_name(std::string_view name) {
  if (name == "train") return SplitName::Train;
  if (name == "eval") return SplitName::Eval;
  if (name == "validation") return SplitName::Validation;
  fail(Errc::InvalidArgument, "unknown split '" + std::string(name) + "' (train, eval, validation)");
}

std::string_view split_name(SplitName split) {
  switch (split) {
    case SplitName::Train: return "train";
    case SplitName::Eval: return "eval";
    case SplitName::Validation: return "validation";
  }
  return "eval";
}

Json EvalReport::to_json() const {
  return {{"model_id", model_id}, {"split", split}, {"mse", mse}, {"n", n}, {"seed", seed}};
}

EvalReport EvalReport::from_json(const Json& j) {
  try {
    return {j.at("model_id").get<std::string>(), j.at("split").get<std::string>(), j.at("mse").get<double>(),
            j.at("n").get<std::size_t>(), j.at("seed").get<std::uint64_t>()};
  } catch (const Json::exception& e) {
    fail(Errc::InvalidArgument, std::string("invalid evaluation report: ") + e.what());
  }
}

EvalReport evaluate(const ModelCheckpoint& ck, const CacheManifest& corpus, SplitName split, std::uint64_t seed,
                    std::uint64_t split_seed, int passes) {
  if (!(ck.field == corpus.field)) fail(Errc::ShapeMismatch, "checkpoint and corpus use different field specs");
  const auto records = load_cached_latents(corpus);
  std::vector<DatasetEntry> entries;
  for (const auto& r : records) entries.push_back(r.entry);
  const SplitAssignment s = make_split(entries, split_seed);
  const auto& ids = split == SplitName::Train ? s.train : split == SplitName::Eval ? s.eval : s.validation;
  if (ids.empty()) fail(Errc::EmptySet, "split '" + std::string(split_name(split)) + "' is empty");
  const DiffusionBatch set = make_diffusion_batch(records, select_rows(records, ids), ck.stats);
  EvalReport report;
  report.model_id = ck.model_id;
  report.split = std::string(split_name(split));
  report.mse = mse_on_latents(ck.denoiser(), set, ck.schedule, seed, passes);
  report.n = ids.size();
  report.seed = seed;
  return report;
}

std::vector<ComparisonRow> compare_reports(const std::vector<EvalReport>& reports) {
  if (reports.empty()) fail(Errc::InvalidArgument, "nothing to compare");
  std::vector<ComparisonRow> rows;
  for (const auto& r : reports) rows.push_back({r.model_id, r.mse});
  std::stable_sort(rows.begin(), rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
    return a.mse != b.mse ? a.mse < b.mse : a.model < b.model;
  });
  return rows;
}

std::string comparison_text(const std::vector<ComparisonRow>& rows) {
  std::size_t width = 5;
  for (const auto& r : rows) width = std::max(width, r.model.size());
  std::string out = "Model" + std::string(width - 5, ' ') + "  MSE in latents\n";
  for (const auto& r : rows) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", r.mse);
    out += r.model + std::string(width - r.model.size(), ' ') + "  " + buf + "\n";
  }
  return out;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::string out = "model,mse\n";
  for (const auto& r : rows) {
    out += r.model;
    out += ',';
    append_g9(out, r.mse);
    out += '\n';
  }
  return out;
}

}  // namespace forge
