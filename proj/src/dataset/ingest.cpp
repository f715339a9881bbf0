// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "common/error.hpp"
#include "dataset/entry.hpp"
#include "dataset/synth.hpp"
#include "mesh_io/formats.hpp"

namespace forge {

namespace fs = std::filesystem;

std::string category_prompt(std::string_view category) {
  return "a 3D model of a human " + std::string(category);
}

Json DatasetEntry::to_json() const {
  Json j = {{"id", id}, {"category", category}, {"prompt", prompt}, {"mesh_path", mesh_path.string()}};
  if (latent_path) j["latent_file"] = latent_path->string();
  return j;
}

DatasetEntry DatasetEntry::from_json(const Json& j) {
  DatasetEntry e;
  e.id = j.at("id").get<std::string>();
  e.category = j.at("category").get<std::string>();
  e.prompt = j.value("prompt", category_prompt(e.category));
  e.mesh_path = j.value("mesh_path", std::string());
  if (j.contains("latent_file")) e.latent_path = j.at("latent_file").get<std::string>();
  if (e.id.empty() || e.category.empty()) fail(Errc::InvalidArgument, "dataset entry needs an id and a category");
  return e;
}

IngestResult ingest_dir(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) fail(Errc::Io, "not a directory: " + root.string());
  std::vector<fs::path> categories;
  for (const auto& d : fs::directory_iterator(root))
    if (d.is_directory()) categories.push_back(d.path());
  std::sort(categories.begin(), categories.end());

  IngestResult result;
  for (const auto& dir : categories) {
    std::vector<fs::path> files;
    for (const auto& f : fs::directory_iterator(dir)) {
      if (!f.is_regular_file()) continue;
      std::string ext = f.path().extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
      if (ext == ".stl" || ext == ".obj" || ext == ".ply") files.push_back(f.path());
    }
    std::sort(files.begin(), files.end());
    const std::string category = dir.filename().string();
    for (const auto& file : files) {
      try {
        const TriangleMesh mesh = load_mesh(file);
        if (mesh.empty()) fail(Errc::EmptyMesh, "mesh has no triangles");
      } catch (const std::exception& e) {
        result.skipped.push_back({file, e.what()});
        continue;
      }
      result.entries.push_back({category + "/" + file.filename().string(), category, category_prompt(category), file,
                                std::nullopt});
    }
  }
  if (result.entries.empty()) fail(Errc::EmptyCorpus, "no readable meshes under " + root.string());
  return result;
}

std::vector<DatasetEntry> synth_corpus(const fs::path& root, const std::vector<std::string>& categories,
                                       int per_category, std::uint64_t seed) {
  if (per_category < 1) fail(Errc::InvalidArgument, "per_category must be >= 1");
  std::vector<DatasetEntry> entries;
  for (const auto& category : categories) {
    fs::create_directories(root / category);
    for (int i = 0; i < per_category; ++i) {
      const std::uint64_t shape_seed = seed * 1000003ULL + static_cast<std::uint64_t>(i);
      const TriangleMesh mesh = synth_shape(category, random_synth_params(category, shape_seed), shape_seed);
      std::ostringstream name;
      name << category << '_' << std::setw(4) << std::setfill('0') << i << ".stl";
      const fs::path path = root / category / name.str();
      write_file_atomic(path, write_stl(mesh, StlEncoding::Binary));
      entries.push_back({category + "/" + name.str(), category, category_prompt(category), path, std::nullopt});
    }
  }
  return entries;
}

}  // namespace forge
