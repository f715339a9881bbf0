// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>
#include <unistd.h>

#include "forge/forge.h"

namespace {

namespace fs = std::filesystem;

struct Dir {
  fs::path path;
  Dir() : path(fs::temp_directory_path() / ("forge-capi-" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~Dir() { fs::remove_all(path); }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  forge_string_free(s);
  return out;
}

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STREQ(forge_version(), "0.3.0");
  EXPECT_STREQ(forge_status_name(FORGE_OK), "Ok");
  EXPECT_STREQ(forge_status_name(FORGE_E_TRUNCATED_FILE), "TruncatedFile");
  EXPECT_TRUE(forge_status_is_user_error(FORGE_E_MALFORMED_FACE));
  EXPECT_FALSE(forge_status_is_user_error(FORGE_E_INTERNAL));
}

TEST(CApi, MeshLifecycle) {
  Dir dir;
  forge_mesh* mesh = nullptr;
  ASSERT_EQ(forge_mesh_synth("sphereoid", 3, &mesh), FORGE_OK) << forge_last_error();
  ASSERT_NE(mesh, nullptr);
  const size_t tris = forge_mesh_triangle_count(mesh);
  EXPECT_GT(tris, 0u);
  const std::string stl = (dir.path / "s.stl").string();
  ASSERT_EQ(forge_mesh_save(mesh, stl.c_str()), FORGE_OK) << forge_last_error();
  forge_mesh_free(mesh);

  forge_mesh* loaded = nullptr;
  ASSERT_EQ(forge_mesh_load(stl.c_str(), &loaded), FORGE_OK);
  EXPECT_EQ(forge_mesh_triangle_count(loaded), tris);
  EXPECT_EQ(forge_mesh_vertex_count(loaded), 3 * tris);
  ASSERT_EQ(forge_mesh_weld(loaded, 0.0), FORGE_OK);
  EXPECT_LT(forge_mesh_vertex_count(loaded), 3 * tris);
  char* report = nullptr;
  ASSERT_EQ(forge_mesh_report(loaded, &report), FORGE_OK);
  EXPECT_NE(take(report).find("\"boundary_edges\":0"), std::string::npos);
  EXPECT_EQ(forge_mesh_weld(loaded, -1.0), FORGE_E_INVALID_ARGUMENT);
  forge_mesh_free(loaded);

  const std::string obj = (dir.path / "s.obj").string();
  EXPECT_EQ(forge_convert(stl.c_str(), obj.c_str()), FORGE_OK);
  EXPECT_TRUE(fs::exists(obj));
}

TEST(CApi, ErrorsCarryMessages) {
  Dir dir;
  const fs::path bad = dir.path / "bad.obj";
  std::ofstream(bad) << "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 5\n";
  forge_mesh* mesh = nullptr;
  EXPECT_EQ(forge_mesh_load(bad.c_str(), &mesh), FORGE_E_INDEX_OUT_OF_RANGE);
  EXPECT_EQ(mesh, nullptr);
  EXPECT_NE(std::string(forge_last_error()).find("line 4"), std::string::npos);
  EXPECT_EQ(forge_mesh_load((dir.path / "missing.stl").c_str(), &mesh), FORGE_E_IO);
  EXPECT_EQ(forge_mesh_load(nullptr, &mesh), FORGE_E_INVALID_ARGUMENT);
  EXPECT_EQ(forge_mesh_synth("teapot", 1, &mesh), FORGE_E_INVALID_PARAMS);
  EXPECT_EQ(forge_compare("[]", nullptr, nullptr), FORGE_E_INVALID_ARGUMENT);
}

TEST(CApi, Compare) {
  char* text = nullptr;
  char* csv = nullptr;
  ASSERT_EQ(forge_compare(R"([{"model_id":"Shap-e","split":"eval","mse":0.147,"n":359,"seed":0},
                                 {"model_id":"Shap-MeD","split":"eval","mse":0.089,"n":359,"seed":0}])", &text, &csv),
            FORGE_OK)
      << forge_last_error();
  EXPECT_EQ(take(text), "Model     MSE in latents\nShap-MeD  0.089000\nShap-e    0.147000\n");
  EXPECT_EQ(take(csv), "model,mse\nShap-MeD,0.089\nShap-e,0.147\n");
}

TEST(CApi, GenerateUnknownModel) {
  Dir dir;
  const std::string config = R"({"model_dir":")" + (dir.path / "models").string() + R"(","output_dir":")" +
                             (dir.path / "out").string() + R"("})";
  fs::create_directories(dir.path / "models");
  char* result = nullptr;
  EXPECT_EQ(forge_generate(config.c_str(), R"({"prompt":"liver","model_id":"nope"})", &result), FORGE_E_UNKNOWN_MODEL);
  EXPECT_EQ(forge_generate(config.c_str(), R"({"prompt":"liver"})", &result), FORGE_E_INVALID_ARGUMENT);
  EXPECT_EQ(forge_generate("{", R"({"prompt":"liver","model_id":"a"})", &result), FORGE_E_INVALID_ARGUMENT);
}

TEST(CApi, ServerBindAndStop) {
  Dir dir;
  fs::create_directories(dir.path / "models");
  const std::string config = R"({"port":0,"model_dir":")" + (dir.path / "models").string() + R"(","output_dir":")" +
                             (dir.path / "out").string() + R"("})";
  forge_server* server = nullptr;
  ASSERT_EQ(forge_server_create(config.c_str(), &server), FORGE_OK) << forge_last_error();
  int port = 0;
  ASSERT_EQ(forge_server_bind(server, &port), FORGE_OK) << forge_last_error();
  EXPECT_GT(port, 0);
  forge_server_stop(server);
  forge_server_free(server);
  EXPECT_EQ(forge_server_create(R"({"port":-5})", &server), FORGE_E_INVALID_ARGUMENT);
}

}  // namespace
