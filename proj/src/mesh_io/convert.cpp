// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cctype>

#include "common/error.hpp"
#include "common/io.hpp"
#include "mesh_io/formats.hpp"

namespace forge {

std::string_view format_extension(MeshFormat f) {
  switch (f) {
    case MeshFormat::Stl: return "stl";
    case MeshFormat::Obj: return "obj";
    case MeshFormat::Ply: return "ply";
  }
  return "";
}

MeshFormat parse_format_name(std::string_view name) {
  std::string s(name);
  if (!s.empty() && s.front() == '.') s.erase(0, 1);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "stl") return MeshFormat::Stl;
  if (s == "obj") return MeshFormat::Obj;
  if (s == "ply") return MeshFormat::Ply;
  fail(Errc::UnsupportedFormat, "unsupported mesh format '" + std::string(name) + "'");
}

TriangleMesh parse_mesh(std::string_view bytes, MeshFormat format) {
  switch (format) {
    case MeshFormat::Stl: return parse_stl(bytes);
    case MeshFormat::Obj: return parse_obj(bytes).mesh;
    case MeshFormat::Ply: return parse_ply(bytes);
  }
  fail(Errc::UnsupportedFormat, "unknown mesh format");
}

std::string write_mesh(const TriangleMesh& mesh, MeshFormat format) {
  switch (format) {
    case MeshFormat::Stl: return write_stl(mesh, StlEncoding::Binary);
    case MeshFormat::Obj: return write_obj(mesh);
    case MeshFormat::Ply: return write_ply(mesh);
  }
  fail(Errc::UnsupportedFormat, "unknown mesh format");
}

MeshFormat detect_format(const std::filesystem::path& path, std::string_view bytes) {
  const auto ext = path.extension().string();
  if (!ext.empty()) {
    try {
      return parse_format_name(ext);
    } catch (const Error&) {
    }
  }
  if (bytes.substr(0, 4) == "ply\n" || bytes.substr(0, 5) == "ply\r\n") return MeshFormat::Ply;
  if (looks_like_ascii_stl(bytes)) return MeshFormat::Stl;
  if (bytes.size() >= 84) return MeshFormat::Stl;
  if (bytes.find("\nv ") != std::string_view::npos || bytes.substr(0, 2) == "v ") return MeshFormat::Obj;
  fail(Errc::UnsupportedFormat, path.string() + ": cannot infer mesh format");
}

TriangleMesh load_mesh(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  try {
    return parse_mesh(bytes, detect_format(path, bytes));
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.what());
  }
}

void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path) {
  write_file_atomic(path, write_mesh(mesh, parse_format_name(path.extension().string())));
}

std::string convert(const std::filesystem::path& path_in, MeshFormat format_out) {
  return write_mesh(weld_vertices(load_mesh(path_in), 0.0), format_out);
}

}  // namespace forge
