// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FORGE_FORGE_H_
#define FORGE_FORGE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(FORGE_BUILDING_LIBRARY)
#define FORGE_API __attribute__((visibility("default")))
#else
#define FORGE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum forge_status {
  FORGE_OK = 0,
  FORGE_E_INVALID_ARGUMENT,
  FORGE_E_IO,
  FORGE_E_UNSUPPORTED_FORMAT,
  FORGE_E_TRUNCATED_FILE,
  FORGE_E_MALFORMED_TOKEN,
  FORGE_E_NON_FINITE_COORDINATE,
  FORGE_E_INDEX_OUT_OF_RANGE,
  FORGE_E_MALFORMED_FACE,
  FORGE_E_EMPTY_MESH,
  FORGE_E_ZERO_EXTENT,
  FORGE_E_NO_AREA,
  FORGE_E_EMPTY_CLOUD,
  FORGE_E_SHAPE_MISMATCH,
  FORGE_E_NON_FINITE_GRADIENT,
  FORGE_E_INVALID_RANGE,
  FORGE_E_EMPTY_SET,
  FORGE_E_EMPTY_RECONSTRUCTION,
  FORGE_E_EMPTY_CORPUS,
  FORGE_E_INVALID_PARAMS,
  FORGE_E_TOO_FEW,
  FORGE_E_STALE_CACHE,
  FORGE_E_BAD_MAGIC,
  FORGE_E_VERSION_UNSUPPORTED,
  FORGE_E_CHECKSUM_MISMATCH,
  FORGE_E_UNKNOWN_MODEL,
  FORGE_E_TIMEOUT,
  FORGE_E_CANCELLED,
  FORGE_E_INTERNAL,
} forge_status;

typedef struct forge_mesh forge_mesh;
typedef struct forge_server forge_server;

// Receives progress lines from long-running calls.
typedef void (*forge_log_fn)(const char* line, void* user);

FORGE_API const char* forge_version(void);
FORGE_API const char* forge_status_name(forge_status status);
// 1 when the caller can fix the failure by changing inputs.
FORGE_API int forge_status_is_user_error(forge_status status);
// Message of the last failure on this thread; never NULL.
FORGE_API const char* forge_last_error(void);
FORGE_API void forge_set_log(forge_log_fn fn, void* user);
// Frees strings returned through char** out-parameters.
FORGE_API void forge_string_free(char* s);

// Meshes
FORGE_API forge_status forge_mesh_load(const char* path, forge_mesh** out);
FORGE_API forge_status forge_mesh_save(const forge_mesh* mesh, const char* path);
FORGE_API forge_status forge_mesh_synth(const char* category, uint64_t seed, forge_mesh** out);
FORGE_API forge_status forge_mesh_weld(forge_mesh* mesh, double tolerance);
FORGE_API size_t forge_mesh_vertex_count(const forge_mesh* mesh);
FORGE_API size_t forge_mesh_triangle_count(const forge_mesh* mesh);
// JSON {vertices, triangles, degenerate_triangles, boundary_edges, nonmanifold_edges, watertight}.
FORGE_API forge_status forge_mesh_report(const forge_mesh* mesh, char** report_json);
FORGE_API void forge_mesh_free(forge_mesh* mesh);
// Output format follows the extension of path_out.
FORGE_API forge_status forge_convert(const char* path_in, const char* path_out);

// Corpora. categories_csv like "sphereoid,bilobe"; the token "organ" or
// "generic" expands to its category set.
FORGE_API forge_status forge_synth_corpus(const char* dir, const char* categories_csv, int per_category,
                                          uint64_t seed, char** entries_json);

// Encoder. config_json may be NULL for defaults.
FORGE_API forge_status forge_encode(const forge_mesh* mesh, const char* config_json, const char* latent_path,
                                    char** report_json);
FORGE_API forge_status forge_latent_decode(const char* latent_path, int resolution, const char* mesh_path);
// Ingests mesh_root, encodes into cache_dir; returns {encoded, reused, failed, skipped}.
FORGE_API forge_status forge_build_cache(const char* mesh_root, const char* config_json, const char* cache_dir,
                                         int parallelism, char** stats_json);

// Training. start_checkpoint and history_csv_path may be NULL.
FORGE_API forge_status forge_train(const char* cache_dir, const char* config_json, const char* start_checkpoint,
                                   const char* checkpoint_out, const char* history_csv_path, const char* description,
                                   char** history_json);
// split is "train", "eval" or "validation". Returns {model_id, split, mse, n, seed}.
FORGE_API forge_status forge_evaluate(const char* checkpoint_path, const char* cache_dir, const char* split,
                                      uint64_t seed, uint64_t split_seed, int passes, char** report_json);
// reports_json is an array of evaluation reports.
FORGE_API forge_status forge_compare(const char* reports_json, char** table_text, char** table_csv);

// Generation with a service config (JSON, may be NULL) and a request body as
// accepted by POST /api/generate. Returns the generation result JSON.
FORGE_API forge_status forge_generate(const char* service_config_json, const char* request_json, char** result_json);
// Filesystem path of a generated file named by a result's "file" field.
FORGE_API forge_status forge_generation_path(const char* service_config_json, const char* file_name, char** path);

// HTTP service.
FORGE_API forge_status forge_server_create(const char* service_config_json, forge_server** out);
FORGE_API forge_status forge_server_bind(forge_server* server, int* port);
// Blocks until forge_server_stop.
FORGE_API forge_status forge_server_serve(forge_server* server);
FORGE_API void forge_server_stop(forge_server* server);
FORGE_API void forge_server_free(forge_server* server);

#ifdef __cplusplus
}
#endif

#endif  // FORGE_FORGE_H_
