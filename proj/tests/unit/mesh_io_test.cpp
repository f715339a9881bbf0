// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstring>
#include <random>

#include <gtest/gtest.h>

#include "common/io.hpp"
#include "geometry/primitives.hpp"
#include "mesh_io/formats.hpp"
#include "test_util.hpp"

namespace forge {
namespace {

using testing::error_code_of;

std::string binary_stl_header(std::uint32_t count) {
  std::string out(80, ' ');
  char buf[4];
  std::memcpy(buf, &count, 4);
  out.append(buf, 4);
  return out;
}

TEST(Stl, CubeBinaryHasTwelveTriangles) {
  const TriangleMesh soup = to_soup(make_cube());
  const TriangleMesh parsed = parse_stl(write_stl(soup));
  EXPECT_EQ(parsed.triangle_count(), 12u);
  EXPECT_EQ(parsed.vertex_count(), 36u);
}

TEST(Stl, EmptyBinary) {
  const std::string bytes = write_stl(TriangleMesh{});
  EXPECT_EQ(bytes.size(), 84u);
  EXPECT_TRUE(parse_stl(bytes).empty());
  EXPECT_TRUE(parse_stl(binary_stl_header(0)).empty());
}

TEST(Stl, OneTriangleIs134Bytes) {
  TriangleMesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  m.triangles = {{0, 1, 2}};
  EXPECT_EQ(write_stl(m).size(), 134u);
}

TEST(Stl, AsciiSingleFacet) {
  const std::string text =
      "solid one\n facet normal 0 0 1\n  outer loop\n   vertex 0 0 0\n   vertex 1 0 0\n   vertex 0 1 0\n"
      "  endloop\n endfacet\nendsolid one\n";
  const TriangleMesh m = parse_stl(text);
  ASSERT_EQ(m.triangle_count(), 1u);
  EXPECT_EQ(m.vertices[0], Vec3(0, 0, 0));
  EXPECT_EQ(m.vertices[1], Vec3(1, 0, 0));
  EXPECT_EQ(m.vertices[2], Vec3(0, 1, 0));
  ASSERT_TRUE(m.normals);
  EXPECT_EQ((*m.normals)[0], Vec3(0, 0, 1));
}

TEST(Stl, TruncatedBinary) {
  std::string bytes = binary_stl_header(5) + std::string(4 * 50, '\0');
  EXPECT_EQ(error_code_of([&] { parse_stl(bytes); }), Errc::TruncatedFile);
}

TEST(Stl, AsciiGrammarErrorCarriesLine) {
  const std::string text = "solid x\nfacet normal 0 0 1\nouter loop\nvertex 0 0 zero\n";
  try {
    parse_stl(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::MalformedToken);
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
}

TEST(Stl, NonFiniteCoordinate) {
  std::string bytes = binary_stl_header(1) + std::string(50, '\0');
  const float inf = std::numeric_limits<float>::infinity();
  std::memcpy(bytes.data() + 84 + 12, &inf, 4);
  EXPECT_EQ(error_code_of([&] { parse_stl(bytes); }), Errc::NonFiniteCoordinate);
}

TEST(Stl, BinaryStartingWithSolidIsStillBinary) {
  TriangleMesh m = to_soup(make_cube());
  std::string bytes = write_stl(m);
  std::memcpy(bytes.data(), "solid cube", 10);
  EXPECT_EQ(parse_stl(bytes).triangle_count(), 12u);
}

TEST(Stl, MissingNormalsAreRecomputed) {
  TriangleMesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(0, 2, 0), Vec3(1, 1, 1)};
  m.triangles = {{0, 1, 2}, {3, 3, 3}};
  const TriangleMesh back = parse_stl(write_stl(m));
  ASSERT_TRUE(back.normals);
  EXPECT_EQ((*back.normals)[0], Vec3(0, 0, 1));
  EXPECT_EQ((*back.normals)[1], Vec3::Zero());
}

TEST(Stl, BinaryRoundTripIsBitExact) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const TriangleMesh m = testing::random_mesh(gen, 100);
    const TriangleMesh back = parse_stl(write_stl(m));
    ASSERT_EQ(back.triangle_count(), m.triangle_count());
    for (std::size_t t = 0; t < m.triangle_count(); ++t)
      for (int k = 0; k < 3; ++k) ASSERT_EQ(back.corner(t, k), m.corner(t, k));
  }
}

TEST(Stl, AsciiRoundTripNineDigits) {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  TriangleMesh m;
  for (int i = 0; i < 30; ++i) m.vertices.emplace_back(coord(gen), coord(gen), coord(gen));
  for (std::uint32_t i = 0; i < 10; ++i) m.triangles.push_back({3 * i, 3 * i + 1, 3 * i + 2});
  const TriangleMesh back = parse_stl(write_stl(m, StlEncoding::Ascii));
  ASSERT_EQ(back.triangle_count(), 10u);
  for (std::size_t t = 0; t < 10; ++t)
    for (int k = 0; k < 3; ++k)
      for (int a = 0; a < 3; ++a) {
        const double want = m.corner(t, k)[a];
        EXPECT_NEAR(back.corner(t, k)[a], want, std::abs(want) * 1e-8 + 1e-300);
      }
}

TEST(Obj, MinimalFile) {
  const auto r = parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3");
  EXPECT_EQ(r.mesh.vertex_count(), 3u);
  ASSERT_EQ(r.mesh.triangle_count(), 1u);
  EXPECT_EQ(r.mesh.triangles[0], (Triangle{0, 1, 2}));
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Obj, QuadIsFanTriangulated) {
  const auto r = parse_obj("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n");
  ASSERT_EQ(r.mesh.triangle_count(), 2u);
  EXPECT_EQ(r.mesh.triangles[0], (Triangle{0, 1, 2}));
  EXPECT_EQ(r.mesh.triangles[1], (Triangle{0, 2, 3}));
}

TEST(Obj, IndexOutOfRange) {
  EXPECT_EQ(error_code_of([] { parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 5\n"); }), Errc::IndexOutOfRange);
  EXPECT_EQ(error_code_of([] { parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 0\n"); }), Errc::IndexOutOfRange);
}

TEST(Obj, MalformedFace) {
  EXPECT_EQ(error_code_of([] { parse_obj("v 0 0 0\nv 1 0 0\nf 1 2\n"); }), Errc::MalformedFace);
}

TEST(Obj, NegativeIndices) {
  const auto r = parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf -3 -2 -1\n");
  ASSERT_EQ(r.mesh.triangle_count(), 1u);
  EXPECT_EQ(r.mesh.triangles[0], (Triangle{0, 1, 2}));
}

TEST(Obj, SlashFormsAndSkippedDirectives) {
  const auto r = parse_obj(
      "mtllib a.mtl\no thing\nv 0 0 0\nv 1 0 0\nv 0 1 0\nvt 0 0\nvt 1 0\nvn 0 0 1\nusemtl red\ns off\n"
      "f 1/1 2/2/1 3//1\n");
  ASSERT_EQ(r.mesh.triangle_count(), 1u);
  EXPECT_EQ(r.mesh.triangles[0], (Triangle{0, 1, 2}));
  ASSERT_FALSE(r.warnings.empty());
  bool saw_vt = false;
  for (const auto& w : r.warnings) saw_vt |= w.find("'vt'") != std::string::npos && w.find("2 ") != std::string::npos;
  EXPECT_TRUE(saw_vt);
}

TEST(Obj, WriterShape) {
  TriangleMesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  m.triangles = {{0, 1, 2}};
  const std::string text = write_obj(m);
  int v = 0, f = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto end = text.find('\n', pos);
    const auto line = text.substr(pos, end - pos);
    v += line.rfind("v ", 0) == 0;
    f += line.rfind("f ", 0) == 0;
    pos = end + 1;
  }
  EXPECT_EQ(v, 3);
  EXPECT_EQ(f, 1);
  EXPECT_NE(text.find("f 1 2 3"), std::string::npos);
}

TEST(Obj, EmptyMeshIsHeaderOnly) {
  const std::string text = write_obj(TriangleMesh{});
  EXPECT_EQ(text.front(), '#');
  EXPECT_EQ(text.find('\n'), text.size() - 1);
}

TEST(Obj, WeldedCubePreservesConnectivity) {
  const TriangleMesh cube = make_cube();
  const auto back = parse_obj(write_obj(cube)).mesh;
  EXPECT_EQ(back.vertex_count(), 8u);
  EXPECT_EQ(back.triangles, cube.triangles);
}

TEST(Obj, RandomRoundTripProperty) {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> coord(-1e3, 1e3);
  for (int trial = 0; trial < 1000; ++trial) {
    TriangleMesh m = testing::random_mesh(gen, 20);
    for (auto& v : m.vertices) v = Vec3(coord(gen), coord(gen), coord(gen));
    const auto back = parse_obj(write_obj(m)).mesh;
    ASSERT_EQ(back.triangles, m.triangles);
    ASSERT_EQ(back.vertex_count(), m.vertex_count());
    for (std::size_t i = 0; i < m.vertex_count(); ++i)
      for (int a = 0; a < 3; ++a)
        ASSERT_LE(std::abs(back.vertices[i][a] - m.vertices[i][a]), 5e-9 * std::abs(m.vertices[i][a]));
  }
}

TEST(Ply, OneTriangleHeader) {
  TriangleMesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  m.triangles = {{0, 1, 2}};
  const std::string text = write_ply(m);
  EXPECT_EQ(text.rfind("ply\nformat ascii 1.0\n", 0), 0u);
  EXPECT_NE(text.find("element vertex 3\n"), std::string::npos);
  EXPECT_NE(text.find("element face 1\n"), std::string::npos);
  EXPECT_NE(text.find("property list uchar int vertex_indices\n"), std::string::npos);
  const TriangleMesh back = parse_ply(text);
  EXPECT_EQ(back.triangles, m.triangles);
  EXPECT_EQ(back.vertices, m.vertices);
}

TEST(Ply, EmptyMesh) {
  const std::string text = write_ply(TriangleMesh{});
  EXPECT_NE(text.find("element vertex 0\n"), std::string::npos);
  EXPECT_NE(text.find("element face 0\n"), std::string::npos);
  EXPECT_NE(text.find("end_header\n"), std::string::npos);
  EXPECT_TRUE(parse_ply(text).empty());
}

TEST(Ply, WeldedCubeCounts) {
  const TriangleMesh welded = weld_vertices(to_soup(make_cube()));
  const TriangleMesh back = parse_ply(write_ply(welded));
  EXPECT_EQ(back.vertex_count(), 8u);
  EXPECT_EQ(back.triangle_count(), 12u);
}

TEST(Weld, CubeSoup) {
  const TriangleMesh soup = to_soup(make_cube());
  ASSERT_EQ(soup.vertex_count(), 36u);
  const TriangleMesh w = weld_vertices(soup, 0.0);
  EXPECT_EQ(w.vertex_count(), 8u);
  EXPECT_EQ(w.triangle_count(), 12u);
  EXPECT_TRUE(validate(w).watertight());
  for (std::size_t t = 0; t < 12; ++t)
    for (int k = 0; k < 3; ++k) EXPECT_EQ(w.corner(t, k), soup.corner(t, k));
}

TEST(Weld, Idempotent) {
  std::mt19937_64 gen(14);
  for (double eps : {0.0, 1e-3, 5.0}) {
    for (int trial = 0; trial < 50; ++trial) {
      const TriangleMesh m = testing::random_mesh(gen);
      const TriangleMesh once = weld_vertices(m, eps);
      const TriangleMesh twice = weld_vertices(once, eps);
      EXPECT_EQ(once.vertices, twice.vertices);
      EXPECT_EQ(once.triangles, twice.triangles);
      EXPECT_EQ(once.triangle_count(), m.triangle_count());
    }
  }
}

TEST(Weld, NearDuplicatesWithinTolerance) {
  TriangleMesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(1e-9, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  m.triangles = {{0, 2, 3}, {1, 3, 2}};
  EXPECT_EQ(weld_vertices(m, 1e-7).vertex_count(), 3u);
  EXPECT_EQ(weld_vertices(m, 0.0).vertex_count(), 4u);
  EXPECT_EQ(error_code_of([&] { weld_vertices(m, -1.0); }), Errc::InvalidArgument);
}

TEST(Validate, FlagsDegenerateAndBoundary) {
  TriangleMesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0)};
  m.triangles = {{0, 1, 2}};
  const MeshReport r = validate(m);
  EXPECT_EQ(r.degenerate_triangles, 1u);
  EXPECT_EQ(r.boundary_edges, 3u);
  EXPECT_FALSE(r.watertight());
  m.triangles.push_back({0, 1, 7});
  EXPECT_FALSE(validate(m).indices_valid);
}

TEST(Convert, CubeStlToObjAndBack) {
  testing::TempDir dir("convert");
  const auto stl = dir / "cube.stl";
  write_file_atomic(stl, write_stl(to_soup(make_cube())));
  const std::string obj = convert(stl, MeshFormat::Obj);
  EXPECT_EQ(parse_obj(obj).mesh.vertex_count(), 8u);
  const auto obj_path = dir / "cube.obj";
  write_file_atomic(obj_path, obj);
  const TriangleMesh back = parse_stl(convert(obj_path, MeshFormat::Stl));
  EXPECT_EQ(back.triangle_count(), 12u);
}

TEST(Convert, PreservesTriangleCount) {
  testing::TempDir dir("convert-count");
  std::mt19937_64 gen(15);
  for (int trial = 0; trial < 20; ++trial) {
    const TriangleMesh m = testing::random_mesh(gen);
    const auto path = dir / "m.stl";
    write_file_atomic(path, write_stl(m));
    for (auto fmt : {MeshFormat::Obj, MeshFormat::Ply, MeshFormat::Stl})
      EXPECT_EQ(parse_mesh(convert(path, fmt), fmt).triangle_count(), m.triangle_count());
  }
}

TEST(Convert, MalformedInputNamesThePath) {
  testing::TempDir dir("convert-bad");
  const auto path = dir / "broken.stl";
  write_file_atomic(path, binary_stl_header(9) + std::string(50, '\0'));
  try {
    convert(path, MeshFormat::Obj);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::TruncatedFile);
    EXPECT_NE(std::string(e.what()).find("broken.stl"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace forge
