// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "forge/forge.h"

namespace {

using Json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUser = 1;
constexpr int kExitInternal = 2;

struct Failure {
  forge_status status;
  std::string message;
};

void check(forge_status s) {
  if (s != FORGE_OK) throw Failure{s, forge_last_error()};
}

void user_error(const std::string& message) { throw Failure{FORGE_E_INVALID_ARGUMENT, message}; }

std::string take(char* s) {
  std::string out = s ? s : "";
  forge_string_free(s);
  return out;
}

class Mesh {
 public:
  Mesh() = default;
  ~Mesh() { forge_mesh_free(p_); }
  Mesh(const Mesh&) = delete;
  Mesh& operator=(const Mesh&) = delete;
  forge_mesh** out() { return &p_; }
  forge_mesh* get() const { return p_; }

 private:
  forge_mesh* p_ = nullptr;
};

Json load_config(const std::string& path) {
  if (path.empty()) return Json::object();
  std::ifstream in(path);
  if (!in) user_error("cannot read config " + path);
  try {
    Json j = Json::parse(in);
    if (!j.is_object()) user_error("config " + path + " must hold a JSON object");
    return j;
  } catch (const Json::exception& e) {
    user_error("config " + path + ": " + e.what());
  }
  return {};
}

// Option value when given on the command line, else the config key, else fallback.
template <class T>
T pick(const CLI::Option* opt, const T& flag_value, const Json& config, const char* key, const T& fallback) {
  if (opt->count() > 0) return flag_value;
  if (config.contains(key)) return config.at(key).get<T>();
  return fallback;
}

// Overrides config[key] with the flag when it was given.
template <class T>
void override_key(Json& config, const CLI::Option* opt, const char* key, const T& value) {
  if (opt->count() > 0) config[key] = value;
}

void print_log(const char* line, void*) { std::fprintf(stderr, "%s\n", line); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forge: mesh conversion, latent encoding, diffusion training and text-to-mesh generation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", forge_version());
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Suppress progress output");

  // convert
  auto* convert = app.add_subcommand("convert", "Convert a mesh between STL, OBJ and PLY (by extension)");
  std::string conv_in, conv_out, conv_config;
  double conv_weld = -1.0;
  convert->add_option("input", conv_in, "Input mesh")->required();
  convert->add_option("output", conv_out, "Output mesh; format from extension")->required();
  convert->add_option("--config", conv_config, "JSON config file");
  auto* conv_weld_opt = convert->add_option("--weld", conv_weld, "Weld vertices within this tolerance before writing");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic shape or a synthetic corpus");
  std::string synth_category, synth_out, synth_corpus, synth_config;
  std::uint64_t synth_seed = 0;
  int synth_count = 16;
  auto* synth_cat_opt = synth->add_option("--category", synth_category, "Shape category for a single mesh");
  auto* synth_seed_opt = synth->add_option("--seed", synth_seed, "Seed");
  auto* synth_out_opt = synth->add_option("--out", synth_out, "Output mesh file, or corpus directory with --corpus");
  auto* synth_corpus_opt =
      synth->add_option("--corpus", synth_corpus, "Comma list of categories or 'organ'/'generic' for a corpus");
  auto* synth_count_opt = synth->add_option("--count", synth_count, "Shapes per category for --corpus");
  synth->add_option("--config", synth_config, "JSON config file with keys category, seed, corpus, count");

  // encode
  auto* encode = app.add_subcommand("encode", "Encode a mesh (or a corpus into a latent cache)");
  std::string enc_mesh, enc_out, enc_config, enc_corpus, enc_cache, enc_decode, enc_report;
  int enc_rays = 0, enc_s1 = 0, enc_s2 = 0, enc_parallel = 1, enc_decode_res = 64;
  double enc_lr = 0.0;
  std::uint64_t enc_seed = 0;
  encode->add_option("mesh", enc_mesh, "Mesh to encode");
  encode->add_option("--out", enc_out, "Latent output file (.smfg)");
  encode->add_option("--config", enc_config, "JSON encode config");
  encode->add_option("--corpus", enc_corpus, "Corpus root (one subdirectory per category)");
  encode->add_option("--cache", enc_cache, "Latent cache directory for --corpus");
  encode->add_option("--parallelism", enc_parallel, "Worker threads for --corpus");
  auto* enc_rays_opt = encode->add_option("--rays", enc_rays, "Rays per step");
  auto* enc_s1_opt = encode->add_option("--stage1-steps", enc_s1, "Steps with the NeRF objective");
  auto* enc_s2_opt = encode->add_option("--stage2-steps", enc_s2, "Steps with the added SDF objective");
  auto* enc_lr_opt = encode->add_option("--lr", enc_lr, "Adam learning rate");
  auto* enc_seed_opt = encode->add_option("--seed", enc_seed, "Seed");
  encode->add_option("--decode", enc_decode, "Also write the decoded mesh here");
  encode->add_option("--decode-resolution", enc_decode_res, "Grid resolution for --decode");
  encode->add_option("--report", enc_report, "Write the fit report JSON here");

  // train
  auto* train = app.add_subcommand("train", "Train or fine-tune the latent diffusion model");
  std::string tr_cache, tr_out, tr_from, tr_config, tr_history, tr_desc;
  double tr_lr = 0.0;
  int tr_epochs = 0, tr_batch = 0;
  std::uint64_t tr_seed = 0;
  train->add_option("--cache", tr_cache, "Latent cache directory")->required();
  train->add_option("--out", tr_out, "Output checkpoint (.smfg)")->required();
  train->add_option("--from", tr_from, "Starting checkpoint; makes this fine-tuning");
  train->add_option("--config", tr_config, "JSON train config");
  train->add_option("--history", tr_history, "Write epoch,train_mse,eval_mse CSV here");
  train->add_option("--description", tr_desc, "Model description shown by the service");
  auto* tr_lr_opt = train->add_option("--lr", tr_lr, "Learning rate (default 1e-4; 1e-5 suits fine-tuning)");
  auto* tr_epochs_opt = train->add_option("--epochs", tr_epochs, "Epochs");
  auto* tr_batch_opt = train->add_option("--batch-size", tr_batch, "Batch size");
  auto* tr_seed_opt = train->add_option("--seed", tr_seed, "Seed");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Latent MSE of checkpoints on a split");
  std::vector<std::string> ev_models;
  std::string ev_cache, ev_split = "eval", ev_config, ev_out, ev_csv;
  std::uint64_t ev_seed = 0, ev_split_seed = 0;
  int ev_passes = 8;
  evaluate->add_option("--model", ev_models, "Checkpoint(s); two or more produce a comparison table")->required();
  evaluate->add_option("--cache", ev_cache, "Latent cache directory")->required();
  auto* ev_split_opt = evaluate->add_option("--split", ev_split, "train, eval or validation");
  auto* ev_seed_opt = evaluate->add_option("--seed", ev_seed, "Noise seed");
  auto* ev_split_seed_opt = evaluate->add_option("--split-seed", ev_split_seed, "Split seed used in training");
  auto* ev_passes_opt = evaluate->add_option("--passes", ev_passes, "Noise draws per example");
  evaluate->add_option("--config", ev_config, "JSON config with keys split, seed, split_seed, passes");
  evaluate->add_option("--out", ev_out, "Write report JSON (array) here");
  evaluate->add_option("--csv", ev_csv, "Write the comparison CSV here");

  // generate
  auto* generate = app.add_subcommand("generate", "Generate a mesh from a prompt");
  std::string gen_prompt, gen_model, gen_out, gen_config, gen_model_dir, gen_output_dir;
  std::uint64_t gen_seed = 0;
  int gen_steps = 0, gen_res = 0;
  generate->add_option("--prompt", gen_prompt, "Text prompt")->required();
  generate->add_option("--model", gen_model, "Model id (checkpoint stem in the model directory)")->required();
  auto* gen_seed_opt = generate->add_option("--seed", gen_seed, "Sampling seed");
  auto* gen_steps_opt = generate->add_option("--steps", gen_steps, "Sampling steps");
  auto* gen_res_opt = generate->add_option("--resolution", gen_res, "Marching-cubes grid resolution");
  generate->add_option("--out", gen_out, "Copy the generated mesh here; format from extension (default .ply)");
  generate->add_option("--config", gen_config, "JSON service config");
  auto* gen_md_opt = generate->add_option("--model-dir", gen_model_dir, "Checkpoint directory");
  auto* gen_od_opt = generate->add_option("--output-dir", gen_output_dir, "Generation output directory");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  std::string sv_config, sv_model_dir, sv_output_dir, sv_host;
  std::vector<std::string> sv_cors;
  int sv_port = 8080;
  serve->add_option("--config", sv_config, "JSON service config");
  auto* sv_port_opt = serve->add_option("--port", sv_port, "Port; 0 binds an ephemeral port");
  auto* sv_host_opt = serve->add_option("--host", sv_host, "Bind address");
  auto* sv_md_opt = serve->add_option("--model-dir", sv_model_dir, "Checkpoint directory");
  auto* sv_od_opt = serve->add_option("--output-dir", sv_output_dir, "Generation output directory");
  auto* sv_cors_opt = serve->add_option("--cors", sv_cors, "Allowed CORS origins");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUser;
  }
  if (!quiet) forge_set_log(print_log, nullptr);

  try {
    if (*convert) {
      const Json cfg = load_config(conv_config);
      const double weld = pick(conv_weld_opt, conv_weld, cfg, "weld", -1.0);
      if (weld >= 0.0) {
        Mesh m;
        check(forge_mesh_load(conv_in.c_str(), m.out()));
        check(forge_mesh_weld(m.get(), weld));
        check(forge_mesh_save(m.get(), conv_out.c_str()));
      } else {
        check(forge_convert(conv_in.c_str(), conv_out.c_str()));
      }
      std::cout << conv_out << "\n";
    } else if (*synth) {
      const Json cfg = load_config(synth_config);
      const auto seed = pick(synth_seed_opt, synth_seed, cfg, "seed", std::uint64_t{0});
      const auto out = pick(synth_out_opt, synth_out, cfg, "out", std::string());
      const auto corpus = pick(synth_corpus_opt, synth_corpus, cfg, "corpus", std::string());
      if (out.empty()) user_error("--out is required");
      if (!corpus.empty()) {
        const int count = pick(synth_count_opt, synth_count, cfg, "count", 16);
        char* entries = nullptr;
        check(forge_synth_corpus(out.c_str(), corpus.c_str(), count, seed, &entries));
        std::cout << Json::parse(take(entries)).size() << " meshes written under " << out << "\n";
      } else {
        const auto category = pick(synth_cat_opt, synth_category, cfg, "category", std::string());
        if (category.empty()) user_error("--category or --corpus is required");
        Mesh m;
        check(forge_mesh_synth(category.c_str(), seed, m.out()));
        check(forge_mesh_save(m.get(), out.c_str()));
        std::cout << out << ": " << forge_mesh_triangle_count(m.get()) << " triangles\n";
      }
    } else if (*encode) {
      Json cfg = load_config(enc_config);
      override_key(cfg, enc_rays_opt, "rays", enc_rays);
      override_key(cfg, enc_s1_opt, "stage1_steps", enc_s1);
      override_key(cfg, enc_s2_opt, "stage2_steps", enc_s2);
      override_key(cfg, enc_lr_opt, "lr", enc_lr);
      override_key(cfg, enc_seed_opt, "seed", enc_seed);
      const std::string cfg_text = cfg.dump();
      if (!enc_corpus.empty()) {
        if (enc_cache.empty()) user_error("--cache is required with --corpus");
        char* stats = nullptr;
        check(forge_build_cache(enc_corpus.c_str(), cfg_text.c_str(), enc_cache.c_str(), enc_parallel, &stats));
        std::cout << take(stats) << "\n";
      } else {
        if (enc_mesh.empty() || enc_out.empty()) user_error("encode needs a mesh and --out (or --corpus/--cache)");
        Mesh m;
        check(forge_mesh_load(enc_mesh.c_str(), m.out()));
        char* report = nullptr;
        check(forge_encode(m.get(), cfg_text.c_str(), enc_out.c_str(), &report));
        const std::string report_text = take(report);
        if (!enc_report.empty()) std::ofstream(enc_report) << report_text << "\n";
        if (!enc_decode.empty()) check(forge_latent_decode(enc_out.c_str(), enc_decode_res, enc_decode.c_str()));
        const Json r = Json::parse(report_text);
        std::cout << enc_out << ": final rgb " << r.value("final_rgb", 0.0) << ", sdf " << r.value("final_sdf", 0.0)
                  << ", " << r.value("elapsed_ms", 0.0) / 1000.0 << " s\n";
      }
    } else if (*train) {
      Json cfg = load_config(tr_config);
      override_key(cfg, tr_lr_opt, "lr", tr_lr);
      override_key(cfg, tr_epochs_opt, "epochs", tr_epochs);
      override_key(cfg, tr_batch_opt, "batch_size", tr_batch);
      override_key(cfg, tr_seed_opt, "seed", tr_seed);
      const std::string cfg_text = cfg.dump();
      char* history = nullptr;
      check(forge_train(tr_cache.c_str(), cfg_text.c_str(), tr_from.empty() ? nullptr : tr_from.c_str(),
                        tr_out.c_str(), tr_history.empty() ? nullptr : tr_history.c_str(), tr_desc.c_str(),
                        &history));
      const Json h = Json::parse(take(history));
      std::cout << tr_out << ": " << h.size() << " epochs";
      if (!h.empty()) std::cout << ", final eval_mse " << h.back().value("eval_mse", Json()).dump();
      std::cout << "\n";
    } else if (*evaluate) {
      const Json cfg = load_config(ev_config);
      const auto split = pick(ev_split_opt, ev_split, cfg, "split", std::string("eval"));
      const auto seed = pick(ev_seed_opt, ev_seed, cfg, "seed", std::uint64_t{0});
      const auto split_seed = pick(ev_split_seed_opt, ev_split_seed, cfg, "split_seed", std::uint64_t{0});
      const int passes = pick(ev_passes_opt, ev_passes, cfg, "passes", 8);
      Json reports = Json::array();
      for (const auto& model : ev_models) {
        char* report = nullptr;
        check(forge_evaluate(model.c_str(), ev_cache.c_str(), split.c_str(), seed, split_seed, passes, &report));
        reports.push_back(Json::parse(take(report)));
      }
      if (!ev_out.empty()) std::ofstream(ev_out) << reports.dump(2) << "\n";
      char* text = nullptr;
      char* csv = nullptr;
      check(forge_compare(reports.dump().c_str(), &text, &csv));
      std::cout << take(text);
      const std::string csv_text = take(csv);
      if (!ev_csv.empty()) std::ofstream(ev_csv) << csv_text;
    } else if (*generate) {
      Json cfg = load_config(gen_config);
      override_key(cfg, gen_md_opt, "model_dir", gen_model_dir);
      override_key(cfg, gen_od_opt, "output_dir", gen_output_dir);
      if (!cfg.contains("output_dir") && !gen_out.empty())
        cfg["output_dir"] = (std::filesystem::temp_directory_path() / "forge-generations").string();
      Json request = {{"prompt", gen_prompt}, {"model_id", gen_model}};
      if (gen_seed_opt->count()) request["seed"] = gen_seed;
      if (gen_steps_opt->count()) request["steps"] = gen_steps;
      if (gen_res_opt->count()) request["grid_resolution"] = gen_res;
      if (!gen_out.empty()) {
        const auto ext = std::filesystem::path(gen_out).extension().string();
        request["output_format"] = ext.empty() ? "ply" : ext.substr(1);
      }
      const std::string cfg_text = cfg.dump();
      char* result = nullptr;
      check(forge_generate(cfg_text.c_str(), request.dump().c_str(), &result));
      const Json r = Json::parse(take(result));
      if (!gen_out.empty()) {
        char* path = nullptr;
        check(forge_generation_path(cfg_text.c_str(), r.at("file").get<std::string>().c_str(), &path));
        std::filesystem::copy_file(take(path), gen_out, std::filesystem::copy_options::overwrite_existing);
        std::cout << gen_out << ": ";
      }
      std::cout << r.at("stats").at("triangle_count") << " triangles, id " << r.at("id").get<std::string>() << "\n";
    } else if (*serve) {
      Json cfg = load_config(sv_config);
      override_key(cfg, sv_port_opt, "port", sv_port);
      override_key(cfg, sv_host_opt, "host", sv_host);
      override_key(cfg, sv_md_opt, "model_dir", sv_model_dir);
      override_key(cfg, sv_od_opt, "output_dir", sv_output_dir);
      override_key(cfg, sv_cors_opt, "cors_origins", sv_cors);
      forge_server* server = nullptr;
      check(forge_server_create(cfg.dump().c_str(), &server));
      int port = 0;
      const forge_status bound = forge_server_bind(server, &port);
      if (bound != FORGE_OK) {
        const Failure f{bound, forge_last_error()};
        forge_server_free(server);
        throw f;
      }
      std::cout << "listening on http://" << cfg.value("host", std::string("127.0.0.1")) << ":" << port << "\n"
                << std::flush;
      const forge_status served = forge_server_serve(server);
      forge_server_free(server);
      check(served);
    }
  } catch (const Failure& f) {
    std::cerr << "forge: " << forge_status_name(f.status) << ": " << f.message << "\n";
    return forge_status_is_user_error(f.status) ? kExitUser : kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "forge: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}
