// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>

#include "common/error.hpp"
#include "common/numfmt.hpp"
#include "mesh_io/formats.hpp"

namespace forge {

static_assert(std::endian::native == std::endian::little, "binary STL I/O assumes little-endian");

namespace {

constexpr std::size_t kHeaderBytes = 80;
constexpr std::size_t kRecordBytes = 50;

float read_f32(const char* p) {
  float v;
  std::memcpy(&v, p, 4);
  return v;
}

void append_f32(std::string& out, double v) {
  const float f = static_cast<float>(v);
  char buf[4];
  std::memcpy(buf, &f, 4);
  out.append(buf, 4);
}

// Stored normals that are not unit length are renormalized; zero stays zero.
Vec3 clean_normal(Vec3 n) {
  const double len = n.norm();
  if (!std::isfinite(len) || len == 0.0) return Vec3::Zero();
  if (std::abs(len - 1.0) > 1e-4) n /= len;
  return n;
}

TriangleMesh parse_binary(std::string_view bytes) {
  if (bytes.size() < kHeaderBytes + 4)
    fail(Errc::TruncatedFile, "binary STL shorter than its 84-byte header");
  std::uint32_t count;
  std::memcpy(&count, bytes.data() + kHeaderBytes, 4);
  const std::uint64_t need = kHeaderBytes + 4 + static_cast<std::uint64_t>(count) * kRecordBytes;
  if (bytes.size() < need)
    fail(Errc::TruncatedFile, "binary STL declares " + std::to_string(count) + " triangles but holds only " +
                                  std::to_string((bytes.size() - kHeaderBytes - 4) / kRecordBytes));
  TriangleMesh mesh;
  mesh.vertices.reserve(3 * std::size_t{count});
  mesh.triangles.reserve(count);
  std::vector<Vec3> normals;
  normals.reserve(count);
  const char* p = bytes.data() + kHeaderBytes + 4;
  for (std::uint32_t t = 0; t < count; ++t, p += kRecordBytes) {
    const Vec3 n(read_f32(p), read_f32(p + 4), read_f32(p + 8));
    const auto base = static_cast<std::uint32_t>(mesh.vertices.size());
    for (int k = 0; k < 3; ++k) {
      const char* q = p + 12 + 12 * k;
      const Vec3 v(read_f32(q), read_f32(q + 4), read_f32(q + 8));
      if (!v.allFinite())
        fail(Errc::NonFiniteCoordinate, "binary STL triangle " + std::to_string(t) + " has a non-finite vertex");
      mesh.vertices.push_back(v);
    }
    mesh.triangles.push_back({base, base + 1, base + 2});
    normals.push_back(clean_normal(n));
  }
  mesh.normals = std::move(normals);
  return mesh;
}

class AsciiTokens {
 public:
  explicit AsciiTokens(std::string_view text) : text_(text) {}

  // Empty view at end of input.
  std::string_view next() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_])) ++pos_;
    token_line_ = line_;
    return text_.substr(start, pos_ - start);
  }

  std::size_t line() const { return token_line_; }

  [[noreturn]] void error(const std::string& what) const {
    fail(Errc::MalformedToken, "ASCII STL line " + std::to_string(token_line_) + ": " + what);
  }

  void expect(std::string_view word) {
    const auto tok = next();
    if (tok != word) error("expected '" + std::string(word) + "', found '" + std::string(tok) + "'");
  }

  double number() {
    auto tok = next();
    if (tok.empty()) error("unexpected end of file, expected a number");
    if (tok.front() == '+') tok.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) error("invalid number '" + std::string(tok) + "'");
    return v;
  }

  // Rest of the current line (solid / endsolid names).
  void skip_line() {
    while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
  }

 private:
  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

  void skip_space() {
    while (pos_ < text_.size() && is_space(text_[pos_])) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t token_line_ = 1;
};

TriangleMesh parse_ascii(std::string_view text) {
  TriangleMesh mesh;
  std::vector<Vec3> normals;
  AsciiTokens in(text);

  auto tok = in.next();
  if (tok != "solid") in.error("expected 'solid'");
  in.skip_line();
  for (;;) {
    tok = in.next();
    if (tok == "endsolid") {
      in.skip_line();
      tok = in.next();
      if (tok.empty()) break;
      if (tok != "solid") in.error("expected 'solid' or end of file after 'endsolid'");
      in.skip_line();
      continue;
    }
    if (tok != "facet") {
      if (tok.empty()) in.error("unexpected end of file, expected 'endsolid'");
      in.error("expected 'facet' or 'endsolid', found '" + std::string(tok) + "'");
    }
    in.expect("normal");
    Vec3 n;
    for (int i = 0; i < 3; ++i) n[i] = in.number();
    in.expect("outer");
    in.expect("loop");
    const auto base = static_cast<std::uint32_t>(mesh.vertices.size());
    for (int k = 0; k < 3; ++k) {
      in.expect("vertex");
      Vec3 v;
      for (int i = 0; i < 3; ++i) v[i] = in.number();
      if (!v.allFinite())
        fail(Errc::NonFiniteCoordinate, "ASCII STL line " + std::to_string(in.line()) + ": non-finite vertex");
      mesh.vertices.push_back(v);
    }
    in.expect("endloop");
    in.expect("endfacet");
    mesh.triangles.push_back({base, base + 1, base + 2});
    normals.push_back(clean_normal(n));
  }
  mesh.normals = std::move(normals);
  return mesh;
}

}  // namespace

bool looks_like_ascii_stl(std::string_view bytes) {
  std::size_t i = 0;
  while (i < bytes.size() && (bytes[i] == ' ' || bytes[i] == '\t' || bytes[i] == '\r' || bytes[i] == '\n')) ++i;
  if (bytes.substr(i, 5) != "solid") return false;
  return bytes.substr(0, 1024).find("facet") != std::string_view::npos;
}

TriangleMesh parse_stl(std::string_view bytes) {
  return looks_like_ascii_stl(bytes) ? parse_ascii(bytes) : parse_binary(bytes);
}

std::string write_stl(const TriangleMesh& mesh, StlEncoding encoding) {
  const std::vector<Vec3> normals =
      mesh.normals && mesh.normals->size() == mesh.triangles.size() ? *mesh.normals : compute_normals(mesh);

  if (encoding == StlEncoding::Binary) {
    std::string out;
    out.reserve(kHeaderBytes + 4 + kRecordBytes * mesh.triangles.size());
    std::string header = "binary STL written by forge";
    header.resize(kHeaderBytes, ' ');
    out += header;
    const auto count = static_cast<std::uint32_t>(mesh.triangles.size());
    char buf[4];
    std::memcpy(buf, &count, 4);
    out.append(buf, 4);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      for (int i = 0; i < 3; ++i) append_f32(out, normals[t][i]);
      for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i) append_f32(out, mesh.corner(t, k)[i]);
      out.append(2, '\0');
    }
    return out;
  }

  std::string out = "solid forge\n";
  const auto triple = [&out](const Vec3& v) {
    append_g9(out, v.x());
    out += ' ';
    append_g9(out, v.y());
    out += ' ';
    append_g9(out, v.z());
    out += '\n';
  };
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    out += "  facet normal ";
    triple(normals[t]);
    out += "    outer loop\n";
    for (int k = 0; k < 3; ++k) {
      out += "      vertex ";
      triple(mesh.corner(t, k));
    }
    out += "    endloop\n  endfacet\n";
  }
  out += "endsolid forge\n";
  return out;
}

}  // namespace forge
