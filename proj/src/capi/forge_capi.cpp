// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "forge/forge.h"

#include <cstring>
#include <mutex>
#include <sstream>

#include "common/error.hpp"
#include "common/io.hpp"
#include "dataset/cache.hpp"
#include "dataset/synth.hpp"
#include "encoder/decode.hpp"
#include "encoder/encode.hpp"
#include "mesh_io/formats.hpp"
#include "pipeline/evaluate.hpp"
#include "pipeline/train.hpp"
#include "service/server.hpp"

struct forge_mesh {
  forge::TriangleMesh mesh;
};

struct forge_server {
  std::unique_ptr<forge::Server> server;
};

namespace {

using forge::Errc;
using forge::Json;

static_assert(static_cast<int>(Errc::Internal) + 1 == FORGE_E_INTERNAL, "status codes mirror Errc");

thread_local std::string g_last_error;

std::mutex g_log_mutex;
forge_log_fn g_log_fn = nullptr;
void* g_log_user = nullptr;

void log_line(const std::string& line) {
  std::lock_guard lock(g_log_mutex);
  if (g_log_fn) g_log_fn(line.c_str(), g_log_user);
}

forge_status status_of(Errc code) { return static_cast<forge_status>(static_cast<int>(code) + 1); }

template <class F>
forge_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return FORGE_OK;
  } catch (const forge::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const Json::exception& e) {
    g_last_error = std::string("invalid JSON: ") + e.what();
    return FORGE_E_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return FORGE_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FORGE_E_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) forge::fail(Errc::InvalidArgument, std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put_string(char** out, const std::string& s) {
  if (out) *out = dup_string(s);
}

Json parse_or_empty(const char* text) {
  if (!text || !*text) return Json::object();
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    forge::fail(Errc::InvalidArgument, std::string("invalid JSON: ") + e.what());
  }
}

forge::ServiceConfig service_config(const char* json) {
  forge::ServiceConfig c = forge::ServiceConfig::from_json(parse_or_empty(json));
  c.apply_env();
  return c;
}

std::vector<std::string> expand_categories(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    if (item == "organ") {
      out.insert(out.end(), forge::kOrganCategories.begin(), forge::kOrganCategories.end());
    } else if (item == "generic") {
      out.insert(out.end(), forge::kGenericCategories.begin(), forge::kGenericCategories.end());
    } else {
      if (!forge::is_synth_category(item)) forge::fail(Errc::InvalidParams, "unknown category '" + item + "'");
      out.push_back(item);
    }
  }
  if (out.empty()) forge::fail(Errc::InvalidArgument, "no categories given");
  return out;
}

}  // namespace

extern "C" {

const char* forge_version(void) { return forge::kServiceVersion; }

const char* forge_status_name(forge_status status) {
  if (status == FORGE_OK) return "Ok";
  if (status < FORGE_OK || status > FORGE_E_INTERNAL) return "Unknown";
  return forge::errc_name(static_cast<Errc>(status - 1)).data();
}

int forge_status_is_user_error(forge_status status) {
  if (status <= FORGE_OK || status > FORGE_E_INTERNAL) return 0;
  return forge::is_user_error(static_cast<Errc>(status - 1)) ? 1 : 0;
}

const char* forge_last_error(void) { return g_last_error.c_str(); }

void forge_set_log(forge_log_fn fn, void* user) {
  std::lock_guard lock(g_log_mutex);
  g_log_fn = fn;
  g_log_user = user;
}

void forge_string_free(char* s) { std::free(s); }

forge_status forge_mesh_load(const char* path, forge_mesh** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new forge_mesh{forge::load_mesh(path)};
  });
}

forge_status forge_mesh_save(const forge_mesh* mesh, const char* path) {
  return guarded([&] {
    require(mesh, "mesh");
    require(path, "path");
    forge::save_mesh(mesh->mesh, path);
  });
}

forge_status forge_mesh_synth(const char* category, uint64_t seed, forge_mesh** out) {
  return guarded([&] {
    require(category, "category");
    require(out, "out");
    *out = new forge_mesh{forge::synth_shape(category, forge::random_synth_params(category, seed), seed)};
  });
}

forge_status forge_mesh_weld(forge_mesh* mesh, double tolerance) {
  return guarded([&] {
    require(mesh, "mesh");
    mesh->mesh = forge::weld_vertices(mesh->mesh, tolerance);
  });
}

size_t forge_mesh_vertex_count(const forge_mesh* mesh) { return mesh ? mesh->mesh.vertex_count() : 0; }

size_t forge_mesh_triangle_count(const forge_mesh* mesh) { return mesh ? mesh->mesh.triangle_count() : 0; }

forge_status forge_mesh_report(const forge_mesh* mesh, char** report_json) {
  return guarded([&] {
    require(mesh, "mesh");
    const auto r = forge::validate(mesh->mesh);
    put_string(report_json, Json{{"vertices", mesh->mesh.vertex_count()},
                                 {"triangles", mesh->mesh.triangle_count()},
                                 {"degenerate_triangles", r.degenerate_triangles},
                                 {"boundary_edges", r.boundary_edges},
                                 {"nonmanifold_edges", r.nonmanifold_edges},
                                 {"watertight", r.watertight()}}
                                .dump());
  });
}

void forge_mesh_free(forge_mesh* mesh) { delete mesh; }

forge_status forge_convert(const char* path_in, const char* path_out) {
  return guarded([&] {
    require(path_in, "path_in");
    require(path_out, "path_out");
    const std::filesystem::path out(path_out);
    const auto format = forge::parse_format_name(out.extension().string());
    forge::write_file_atomic(out, forge::convert(path_in, format));
  });
}

forge_status forge_synth_corpus(const char* dir, const char* categories_csv, int per_category, uint64_t seed,
                                char** entries_json) {
  return guarded([&] {
    require(dir, "dir");
    require(categories_csv, "categories_csv");
    const auto entries = forge::synth_corpus(dir, expand_categories(categories_csv), per_category, seed);
    Json list = Json::array();
    for (const auto& e : entries) list.push_back(e.to_json());
    put_string(entries_json, list.dump());
  });
}

forge_status forge_encode(const forge_mesh* mesh, const char* config_json, const char* latent_path,
                          char** report_json) {
  return guarded([&] {
    require(mesh, "mesh");
    require(latent_path, "latent_path");
    const auto config = forge::EncodeConfig::from_json(parse_or_empty(config_json));
    const auto result = forge::encode_mesh(mesh->mesh, config);
    forge::save_latent(latent_path, result.latent, config.field,
                       {{"config_hash", config.hash()}, {"report", result.report.to_json()}});
    put_string(report_json, result.report.to_json().dump());
  });
}

forge_status forge_latent_decode(const char* latent_path, int resolution, const char* mesh_path) {
  return guarded([&] {
    require(latent_path, "latent_path");
    require(mesh_path, "mesh_path");
    if (resolution < 2 || resolution > 512) forge::fail(Errc::InvalidArgument, "resolution must be in [2, 512]");
    forge::FieldSpec spec;
    const auto latent = forge::load_latent(latent_path, &spec);
    forge::save_mesh(forge::latent_to_mesh(latent, spec, resolution), mesh_path);
  });
}

forge_status forge_build_cache(const char* mesh_root, const char* config_json, const char* cache_dir,
                               int parallelism, char** stats_json) {
  return guarded([&] {
    require(mesh_root, "mesh_root");
    require(cache_dir, "cache_dir");
    const auto config = forge::EncodeConfig::from_json(parse_or_empty(config_json));
    const auto ingest = forge::ingest_dir(mesh_root);
    for (const auto& s : ingest.skipped) log_line("skipped " + s.path.string() + ": " + s.reason);
    forge::CacheStats stats;
    forge::CacheOptions opts;
    opts.parallelism = parallelism;
    opts.log = log_line;
    forge::build_latent_cache(ingest.entries, config, cache_dir, opts, &stats);
    put_string(stats_json, Json{{"encoded", stats.encoded},
                                {"reused", stats.reused},
                                {"failed", stats.failed},
                                {"skipped", ingest.skipped.size()}}
                               .dump());
  });
}

forge_status forge_train(const char* cache_dir, const char* config_json, const char* start_checkpoint,
                         const char* checkpoint_out, const char* history_csv_path, const char* description,
                         char** history_json) {
  return guarded([&] {
    require(cache_dir, "cache_dir");
    require(checkpoint_out, "checkpoint_out");
    const auto config = forge::TrainConfig::from_json(parse_or_empty(config_json));
    const auto manifest = forge::load_manifest(cache_dir);
    std::optional<forge::ModelCheckpoint> start;
    if (start_checkpoint && *start_checkpoint) start = forge::load_checkpoint(start_checkpoint);
    const std::filesystem::path out(checkpoint_out);
    forge::TrainOptions opts;
    opts.description = description ? description : "";
    opts.on_epoch = [](const forge::EpochRecord& r) {
      log_line("epoch " + std::to_string(r.epoch) + " train_mse " + std::to_string(r.train_mse) + " eval_mse " +
               std::to_string(r.eval_mse));
    };
    const auto result = forge::train(manifest, config, start, opts);
    forge::save_checkpoint(out, result.checkpoint);
    if (history_csv_path && *history_csv_path)
      forge::write_file_atomic(history_csv_path, forge::history_csv(result.history));
    put_string(history_json, result.checkpoint.provenance.at("history").dump());
  });
}

forge_status forge_evaluate(const char* checkpoint_path, const char* cache_dir, const char* split, uint64_t seed,
                            uint64_t split_seed, int passes, char** report_json) {
  return guarded([&] {
    require(checkpoint_path, "checkpoint_path");
    require(cache_dir, "cache_dir");
    const auto ck = forge::load_checkpoint(checkpoint_path);
    const auto report = forge::evaluate(ck, forge::load_manifest(cache_dir),
                                        forge::parse_split_name(split ? split : "eval"), seed, split_seed, passes);
    put_string(report_json, report.to_json().dump());
  });
}

forge_status forge_compare(const char* reports_json, char** table_text, char** table_csv) {
  return guarded([&] {
    require(reports_json, "reports_json");
    const Json list = Json::parse(reports_json);
    if (!list.is_array()) forge::fail(Errc::InvalidArgument, "reports must be a JSON array");
    std::vector<forge::EvalReport> reports;
    for (const auto& r : list) reports.push_back(forge::EvalReport::from_json(r));
    const auto rows = forge::compare_reports(reports);
    put_string(table_text, forge::comparison_text(rows));
    put_string(table_csv, forge::comparison_csv(rows));
  });
}

forge_status forge_generate(const char* service_config_json, const char* request_json, char** result_json) {
  return guarded([&] {
    require(request_json, "request_json");
    forge::Generator gen(service_config(service_config_json));
    const auto request = forge::GenerateRequest::from_json(Json::parse(request_json));
    put_string(result_json, gen.generate(request).to_json().dump());
  });
}

forge_status forge_generation_path(const char* service_config_json, const char* file_name, char** path) {
  return guarded([&] {
    require(file_name, "file_name");
    std::string name = file_name;
    if (name.starts_with("/files/")) name.erase(0, 7);
    forge::Generator gen(service_config(service_config_json));
    const auto p = gen.file_path(name);
    if (!p) forge::fail(Errc::Io, "no generated file '" + name + "'");
    put_string(path, p->string());
  });
}

forge_status forge_server_create(const char* service_config_json, forge_server** out) {
  return guarded([&] {
    require(out, "out");
    *out = new forge_server{std::make_unique<forge::Server>(service_config(service_config_json), log_line)};
  });
}

forge_status forge_server_bind(forge_server* server, int* port) {
  return guarded([&] {
    require(server, "server");
    const int p = server->server->bind();
    if (port) *port = p;
  });
}

forge_status forge_server_serve(forge_server* server) {
  return guarded([&] {
    require(server, "server");
    server->server->serve();
  });
}

void forge_server_stop(forge_server* server) {
  if (server) server->server->stop();
}

void forge_server_free(forge_server* server) { delete server; }

}  // extern "C"
