// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "pipeline/train.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <unordered_map>

#include "common/error.hpp"
#include "common/hash.hpp"
#include "common/memory.hpp"
#include "common/numfmt.hpp"
#include "common/rng.hpp"
#include "diffusion/text_embed.hpp"

namespace forge {

namespace {

constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kShuffleStream = 2;
constexpr std::uint64_t kStepStream = 3;
constexpr std::uint64_t kEvalStream = 4;

}  // namespace

void TrainConfig::check() const {
  if (!(lr > 0.0) || batch_size < 1 || epochs < 0 || eval_passes < 1)
    fail(Errc::InvalidArgument, "train config needs lr > 0, batch_size >= 1, epochs >= 0, eval_passes >= 1");
  if (!(cond_dropout >= 0.0 && cond_dropout < 1.0)) fail(Errc::InvalidArgument, "cond_dropout must be in [0, 1)");
  if (denoiser.blocks < 0 || denoiser.width < 1 || !(denoiser.cond_gain > 0.0))
    fail(Errc::InvalidArgument, "invalid denoiser shape");
}

Json TrainConfig::to_json() const {
  return {{"lr", lr},
          {"batch_size", batch_size},
          {"epochs", epochs},
          {"seed", seed},
          {"split_seed", split_seed},
          {"schedule", {{"steps", schedule_steps}, {"beta_min", beta_min}, {"beta_max", beta_max}}},
          {"denoiser",
           {{"blocks", denoiser.blocks},
            {"width", denoiser.width},
            {"activation", activation_name(denoiser.activation)},
            {"cond_gain", denoiser.cond_gain}}},
          {"cond_dropout", cond_dropout},
          {"eval_passes", eval_passes}};
}

TrainConfig TrainConfig::from_json(const Json& j) {
  TrainConfig c;
  try {
    c.lr = j.value("lr", c.lr);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.epochs = j.value("epochs", c.epochs);
    c.seed = j.value("seed", c.seed);
    c.split_seed = j.value("split_seed", c.split_seed);
    if (j.contains("schedule")) {
      const auto& s = j.at("schedule");
      c.schedule_steps = s.value("steps", c.schedule_steps);
      c.beta_min = s.value("beta_min", c.beta_min);
      c.beta_max = s.value("beta_max", c.beta_max);
    }
    if (j.contains("denoiser")) {
      const auto& d = j.at("denoiser");
      c.denoiser.blocks = d.value("blocks", c.denoiser.blocks);
      c.denoiser.width = d.value("width", c.denoiser.width);
      c.denoiser.activation =
          parse_activation(d.value("activation", std::string(activation_name(c.denoiser.activation))));
      c.denoiser.cond_gain = d.value("cond_gain", c.denoiser.cond_gain);
    }
    c.cond_dropout = j.value("cond_dropout", c.cond_dropout);
    c.eval_passes = j.value("eval_passes", c.eval_passes);
  } catch (const Json::exception& e) {
    fail(Errc::InvalidArgument, std::string("invalid train config: ") + e.what());
  }
  c.check();
  return c;
}

std::string TrainConfig::hash() const { return hex64(fnv1a64(canonical_dump(to_json()))); }

std::vector<std::size_t> select_rows(const std::vector<LatentRecord>& records, const std::vector<std::string>& ids) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < records.size(); ++i) index.emplace(records[i].entry.id, i);
  std::vector<std::size_t> rows;
  rows.reserve(ids.size());
  for (const auto& id : ids) {
    const auto it = index.find(id);
    if (it == index.end()) fail(Errc::StaleCache, "no cached latent for '" + id + "'");
    rows.push_back(it->second);
  }
  return rows;
}

DiffusionBatch make_diffusion_batch(const std::vector<LatentRecord>& records, const std::vector<std::size_t>& rows,
                                    const LatentStats& stats) {
  const auto D = stats.mean.size();
  DiffusionBatch batch;
  batch.x0.resize(D, static_cast<Eigen::Index>(rows.size()));
  batch.cond.resize(kConditionDim, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t c = 0; c < rows.size(); ++c) {
    const auto& rec = records[rows[c]];
    if (static_cast<Eigen::Index>(rec.latent.values.size()) != D)
      fail(Errc::ShapeMismatch, "latent '" + rec.entry.id + "' has the wrong dimension");
    const Vec x = Eigen::Map<const Vec>(rec.latent.values.data(), D);
    batch.x0.col(static_cast<Eigen::Index>(c)) = stats.standardize(x);
    batch.cond.col(static_cast<Eigen::Index>(c)) = embed_text(rec.entry.prompt).embedding;
  }
  return batch;
}

TrainResult train(const CacheManifest& corpus, const TrainConfig& config, const std::optional<ModelCheckpoint>& start,
                  const TrainOptions& options) {
  config.check();
  tune_allocator();
  const auto records = load_cached_latents(corpus);
  std::vector<DatasetEntry> entries;
  for (const auto& r : records) entries.push_back(r.entry);
  const SplitAssignment split = make_split(entries, config.split_seed);
  const auto train_rows = select_rows(records, split.train);
  const auto eval_rows = select_rows(records, split.eval);
  const int D = static_cast<int>(corpus.field.param_count());

  Mat train_latents(D, static_cast<Eigen::Index>(train_rows.size()));
  for (std::size_t c = 0; c < train_rows.size(); ++c)
    train_latents.col(static_cast<Eigen::Index>(c)) =
        Eigen::Map<const Vec>(records[train_rows[c]].latent.values.data(), D);

  ModelCheckpoint ck;
  ck.field = corpus.field;
  ck.stats = LatentStats::compute(train_latents);
  if (start) {
    if (start->spec.latent_dim != D || !(start->field == corpus.field))
      fail(Errc::ShapeMismatch, "starting checkpoint was trained on a different field spec");
    ck.spec = start->spec;
    ck.params = start->params;
    ck.schedule = start->schedule;
  } else {
    ck.spec = config.denoiser;
    ck.spec.latent_dim = D;
    ck.params = init_denoiser(ck.spec, derive_seed(config.seed, kInitStream));
    ck.schedule = make_schedule(config.schedule_steps, config.beta_min, config.beta_max);
  }

  const DiffusionBatch eval_set = make_diffusion_batch(records, eval_rows, ck.stats);
  const DiffusionBatch train_set = make_diffusion_batch(records, train_rows, ck.stats);
  const std::uint64_t eval_seed = derive_seed(config.seed, kEvalStream);

  TrainResult result;
  Json history = Json::array();
  const auto provenance = [&](int epoch) {
    Json p = {{"train_config", config.to_json()},
              {"train_config_hash", config.hash()},
              {"corpus_config_hash", corpus.config_hash},
              {"epoch", epoch},
              {"history", history},
              {"description", options.description},
              {"created_at", utc_timestamp()},
              {"train_size", train_rows.size()},
              {"eval_size", eval_rows.size()}};
    if (start) p["base_model"] = start->model_id;
    if (!result.history.empty()) p["eval_mse"] = result.history.back().eval_mse;
    return p;
  };

  if (options.checkpoint_dir) std::filesystem::create_directories(*options.checkpoint_dir);
  AdamState adam(ck.params.size(), config.lr);
  std::vector<std::size_t> order(train_rows.size());
  const auto B = static_cast<std::size_t>(config.batch_size);
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    Rng(derive_seed(config.seed, kShuffleStream, static_cast<std::uint64_t>(epoch))).shuffle(order.begin(), order.end());
    double loss_sum = 0.0;
    std::size_t steps = 0;
    for (std::size_t at = 0; at < order.size(); at += B) {
      const std::size_t n = std::min(B, order.size() - at);
      DiffusionBatch batch;
      batch.x0.resize(D, static_cast<Eigen::Index>(n));
      batch.cond.resize(kConditionDim, static_cast<Eigen::Index>(n));
      for (std::size_t k = 0; k < n; ++k) {
        batch.x0.col(static_cast<Eigen::Index>(k)) = train_set.x0.col(static_cast<Eigen::Index>(order[at + k]));
        batch.cond.col(static_cast<Eigen::Index>(k)) = train_set.cond.col(static_cast<Eigen::Index>(order[at + k]));
      }
      const std::uint64_t step_seed =
          derive_seed(config.seed, kStepStream, static_cast<std::uint64_t>(epoch), static_cast<std::uint64_t>(steps));
      try {
        loss_sum += training_step(ck.spec, ck.params, batch, ck.schedule, adam, step_seed, config.cond_dropout);
      } catch (const Error& e) {
        if (e.code() == Errc::NonFiniteGradient && options.checkpoint_dir) {
          ck.provenance = provenance(epoch - 1);
          ck.provenance["aborted"] = e.what();
          save_checkpoint(*options.checkpoint_dir / "last_good.smfg", ck);
        }
        throw;
      }
      ++steps;
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_mse = steps ? loss_sum / static_cast<double>(steps) : 0.0;
    rec.eval_mse = eval_set.size() ? mse_on_latents(ck.denoiser(), eval_set, ck.schedule, eval_seed, config.eval_passes)
                                   : std::nan("");
    result.history.push_back(rec);
    history.push_back({{"epoch", rec.epoch}, {"train_mse", rec.train_mse}, {"eval_mse", rec.eval_mse}});
    if (options.checkpoint_dir) {
      char name[32];
      std::snprintf(name, sizeof name, "epoch_%03d.smfg", epoch);
      ck.provenance = provenance(epoch);
      save_checkpoint(*options.checkpoint_dir / name, ck);
    }
    if (options.on_epoch) options.on_epoch(rec);
  }
  ck.provenance = provenance(config.epochs);
  result.checkpoint = std::move(ck);
  return result;
}

std::string history_csv(const std::vector<EpochRecord>& history) {
  std::string out = "epoch,train_mse,eval_mse\n";
  for (const auto& r : history) {
    out += std::to_string(r.epoch);
    out += ',';
    append_g9(out, r.train_mse);
    out += ',';
    append_g9(out, r.eval_mse);
    out += '\n';
  }
  return out;
}

}  // namespace forge
