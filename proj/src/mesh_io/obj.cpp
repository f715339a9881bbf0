// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <map>

#include "common/error.hpp"
#include "common/numfmt.hpp"
#include "mesh_io/formats.hpp"

namespace forge {

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_blank(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_blank(line[i])) ++i;
    if (i > start) words.push_back(line.substr(start, i - start));
  }
  return words;
}

[[noreturn]] void malformed(Errc code, std::size_t line_no, const std::string& what) {
  fail(code, "OBJ line " + std::to_string(line_no) + ": " + what);
}

double parse_double(std::string_view tok, std::size_t line_no) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    malformed(Errc::MalformedToken, line_no, "invalid number '" + std::string(tok) + "'");
  return v;
}

// Resolves the vertex part of a face token ("7", "7/2", "7//3", "-1/2/3").
std::uint32_t face_vertex(std::string_view tok, std::size_t vertex_count, std::size_t line_no) {
  const auto slash = tok.find('/');
  const std::string_view head = tok.substr(0, slash);
  long long idx = 0;
  const auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), idx);
  if (ec != std::errc() || ptr != head.data() + head.size() || head.empty())
    malformed(Errc::MalformedFace, line_no, "invalid face index '" + std::string(tok) + "'");
  const auto n = static_cast<long long>(vertex_count);
  const long long resolved = idx > 0 ? idx - 1 : n + idx;
  if (idx == 0 || resolved < 0 || resolved >= n)
    malformed(Errc::IndexOutOfRange, line_no,
              "face index " + std::to_string(idx) + " out of range (" + std::to_string(n) + " vertices)");
  return static_cast<std::uint32_t>(resolved);
}

}  // namespace

ObjParseResult parse_obj(std::string_view text) {
  ObjParseResult result;
  auto& mesh = result.mesh;
  std::map<std::string, std::size_t> skipped;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto words = split_words(line);
    if (words.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto kind = words[0];
    if (kind == "v") {
      if (words.size() < 4) malformed(Errc::MalformedToken, line_no, "vertex needs 3 coordinates");
      const Vec3 v(parse_double(words[1], line_no), parse_double(words[2], line_no), parse_double(words[3], line_no));
      if (!v.allFinite()) malformed(Errc::NonFiniteCoordinate, line_no, "non-finite vertex");
      mesh.vertices.push_back(v);
    } else if (kind == "vn") {
      if (words.size() < 4) malformed(Errc::MalformedToken, line_no, "normal needs 3 components");
      for (int i = 1; i <= 3; ++i) parse_double(words[i], line_no);
    } else if (kind == "f") {
      if (words.size() < 4) malformed(Errc::MalformedFace, line_no, "face needs at least 3 vertices");
      std::vector<std::uint32_t> poly;
      poly.reserve(words.size() - 1);
      for (std::size_t i = 1; i < words.size(); ++i)
        poly.push_back(face_vertex(words[i], mesh.vertices.size(), line_no));
      for (std::size_t i = 1; i + 1 < poly.size(); ++i) mesh.triangles.push_back({poly[0], poly[i], poly[i + 1]});
    } else {
      ++skipped[std::string(kind)];
    }
    if (end == text.size()) break;
  }
  for (const auto& [kind, count] : skipped)
    result.warnings.push_back("skipped " + std::to_string(count) + " '" + kind + "' line" + (count == 1 ? "" : "s"));
  return result;
}

std::string write_obj(const TriangleMesh& mesh) {
  std::string out = "# OBJ written by forge\n";
  out.reserve(out.size() + 40 * mesh.vertices.size() + 24 * mesh.triangles.size());
  for (const auto& v : mesh.vertices) {
    out += "v ";
    append_g9(out, v.x());
    out += ' ';
    append_g9(out, v.y());
    out += ' ';
    append_g9(out, v.z());
    out += '\n';
  }
  for (const auto& t : mesh.triangles) {
    out += 'f';
    for (auto idx : t) {
      out += ' ';
      append_uint(out, idx + 1ULL);
    }
    out += '\n';
  }
  return out;
}

}  // namespace forge
