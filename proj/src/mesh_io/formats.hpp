// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mesh_io/mesh.hpp"

namespace forge {

enum class MeshFormat { Stl, Obj, Ply };
enum class StlEncoding { Ascii, Binary };

std::string_view format_extension(MeshFormat f);
// Accepts "stl", ".stl", "STL", ... Throws UnsupportedFormat otherwise.
MeshFormat parse_format_name(std::string_view name);

// Binary unless the content starts with "solid" and the token "facet" occurs
// within the first KiB.
bool looks_like_ascii_stl(std::string_view bytes);

TriangleMesh parse_stl(std::string_view bytes);
std::string write_stl(const TriangleMesh& mesh, StlEncoding encoding = StlEncoding::Binary);

struct ObjParseResult {
  TriangleMesh mesh;
  // One entry per skipped directive kind, e.g. "skipped 12 'vt' lines".
  std::vector<std::string> warnings;
};

ObjParseResult parse_obj(std::string_view text);
std::string write_obj(const TriangleMesh& mesh);

// ASCII PLY 1.0; binary PLY is rejected with UnsupportedFormat.
TriangleMesh parse_ply(std::string_view text);
std::string write_ply(const TriangleMesh& mesh);

TriangleMesh parse_mesh(std::string_view bytes, MeshFormat format);
std::string write_mesh(const TriangleMesh& mesh, MeshFormat format);

// Format from the extension, falling back to content sniffing.
MeshFormat detect_format(const std::filesystem::path& path, std::string_view bytes);

// Parser errors are rethrown prefixed with the path.
TriangleMesh load_mesh(const std::filesystem::path& path);
void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path);

// parse -> weld (tolerance 0) -> write.
std::string convert(const std::filesystem::path& path_in, MeshFormat format_out);

}  // namespace forge
