// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <cmath>

#include "common/error.hpp"
#include "common/numfmt.hpp"
#include "mesh_io/formats.hpp"

namespace forge {

namespace {

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    const std::size_t end = std::min(text_.find('\n', pos_), text_.size());
    line = text_.substr(pos_, end - pos_);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos_ = end + 1;
    ++line_no_;
    return true;
  }

  std::size_t line_no() const { return line_no_; }

  [[noreturn]] void error(const std::string& what) const {
    fail(Errc::MalformedToken, "PLY line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

std::vector<std::string_view> words_of(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t s = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > s) out.push_back(line.substr(s, i - s));
  }
  return out;
}

template <class T>
T number(std::string_view tok, const LineReader& in) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  T v{};
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) in.error("invalid number '" + std::string(tok) + "'");
  return v;
}

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<std::string> properties;  // "list" for list properties
};

}  // namespace

TriangleMesh parse_ply(std::string_view text) {
  LineReader in(text);
  std::string_view line;
  if (!in.next(line) || line != "ply") in.error("missing 'ply' magic");
  std::vector<Element> elements;
  bool ended = false;
  while (in.next(line)) {
    const auto w = words_of(line);
    if (w.empty()) continue;
    if (w[0] == "format") {
      if (w.size() < 2 || w[1] != "ascii")
        fail(Errc::UnsupportedFormat, "only ASCII PLY is supported");
    } else if (w[0] == "comment" || w[0] == "obj_info") {
    } else if (w[0] == "element") {
      if (w.size() != 3) in.error("malformed element declaration");
      elements.push_back({std::string(w[1]), number<std::size_t>(w[2], in), {}});
    } else if (w[0] == "property") {
      if (elements.empty()) in.error("property before element");
      if (w.size() >= 2 && w[1] == "list") {
        if (w.size() != 5) in.error("malformed list property");
        elements.back().properties.push_back(std::string("list:") + std::string(w[4]));
      } else {
        if (w.size() != 3) in.error("malformed property");
        elements.back().properties.emplace_back(w[2]);
      }
    } else if (w[0] == "end_header") {
      ended = true;
      break;
    } else {
      in.error("unknown header keyword '" + std::string(w[0]) + "'");
    }
  }
  if (!ended) in.error("missing end_header");

  TriangleMesh mesh;
  for (const auto& el : elements) {
    if (el.name == "vertex") {
      int ix = -1, iy = -1, iz = -1;
      for (std::size_t p = 0; p < el.properties.size(); ++p) {
        if (el.properties[p] == "x") ix = static_cast<int>(p);
        if (el.properties[p] == "y") iy = static_cast<int>(p);
        if (el.properties[p] == "z") iz = static_cast<int>(p);
      }
      if (ix < 0 || iy < 0 || iz < 0) in.error("vertex element lacks x/y/z");
      mesh.vertices.reserve(el.count);
      for (std::size_t i = 0; i < el.count; ++i) {
        if (!in.next(line)) fail(Errc::TruncatedFile, "PLY ends before all vertices");
        const auto w = words_of(line);
        if (w.size() < el.properties.size()) in.error("vertex line has too few values");
        const Vec3 v(number<double>(w[ix], in), number<double>(w[iy], in), number<double>(w[iz], in));
        if (!v.allFinite()) fail(Errc::NonFiniteCoordinate, "PLY line " + std::to_string(in.line_no()) + ": non-finite vertex");
        mesh.vertices.push_back(v);
      }
    } else if (el.name == "face") {
      for (std::size_t i = 0; i < el.count; ++i) {
        if (!in.next(line)) fail(Errc::TruncatedFile, "PLY ends before all faces");
        const auto w = words_of(line);
        if (w.empty()) in.error("empty face line");
        const auto n = number<std::size_t>(w[0], in);
        if (n < 3) fail(Errc::MalformedFace, "PLY line " + std::to_string(in.line_no()) + ": face needs >= 3 vertices");
        if (w.size() < n + 1) in.error("face line has too few indices");
        std::vector<std::uint32_t> poly(n);
        for (std::size_t k = 0; k < n; ++k) {
          const auto idx = number<long long>(w[k + 1], in);
          if (idx < 0 || static_cast<std::size_t>(idx) >= mesh.vertices.size())
            fail(Errc::IndexOutOfRange, "PLY line " + std::to_string(in.line_no()) + ": vertex index out of range");
          poly[k] = static_cast<std::uint32_t>(idx);
        }
        for (std::size_t k = 1; k + 1 < n; ++k) mesh.triangles.push_back({poly[0], poly[k], poly[k + 1]});
      }
    } else {
      for (std::size_t i = 0; i < el.count; ++i)
        if (!in.next(line)) fail(Errc::TruncatedFile, "PLY ends inside element '" + el.name + "'");
    }
  }
  return mesh;
}

std::string write_ply(const TriangleMesh& mesh) {
  std::string out =
      "ply\n"
      "format ascii 1.0\n"
      "comment written by forge\n";
  out += "element vertex ";
  append_uint(out, mesh.vertices.size());
  out +=
      "\nproperty float x\n"
      "property float y\n"
      "property float z\n"
      "element face ";
  append_uint(out, mesh.triangles.size());
  out +=
      "\nproperty list uchar int vertex_indices\n"
      "end_header\n";
  for (const auto& v : mesh.vertices) {
    // values are declared float; print them at float precision
    append_g9(out, static_cast<float>(v.x()));
    out += ' ';
    append_g9(out, static_cast<float>(v.y()));
    out += ' ';
    append_g9(out, static_cast<float>(v.z()));
    out += '\n';
  }
  for (const auto& t : mesh.triangles) {
    out += '3';
    for (auto idx : t) {
      out += ' ';
      append_uint(out, idx);
    }
    out += '\n';
  }
  return out;
}

}  // namespace forge
