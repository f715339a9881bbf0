// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "geometry/png.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "common/error.hpp"
#include "common/io.hpp"

namespace forge {

namespace {

void append_bytes(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::string*>(png_get_io_ptr(png));
  out->append(reinterpret_cast<const char*>(data), length);
}

void no_flush(png_structp) {}

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); }

}  // namespace

std::string encode_png(const RgbaImage& image) {
  if (image.width <= 0 || image.height <= 0) fail(Errc::InvalidArgument, "cannot encode an empty image");
  std::vector<std::uint8_t> rows(static_cast<std::size_t>(image.width) * image.height * 4);
  for (std::size_t i = 0; i < image.pixels.size(); ++i) {
    const Rgba& p = image.pixels[i];
    rows[4 * i + 0] = to_byte(p.r);
    rows[4 * i + 1] = to_byte(p.g);
    rows[4 * i + 2] = to_byte(p.b);
    rows[4 * i + 3] = to_byte(p.a);
  }
  std::vector<png_bytep> row_ptrs(image.height);
  for (int y = 0; y < image.height; ++y) row_ptrs[y] = rows.data() + static_cast<std::size_t>(y) * image.width * 4;

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) fail(Errc::Internal, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  std::string out;
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(Errc::Internal, "PNG encoding failed");
  }
  png_set_write_fn(png, &out, append_bytes, no_flush);
  png_set_IHDR(png, info, image.width, image.height, 8, PNG_COLOR_TYPE_RGBA, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_rows(png, info, row_ptrs.data());
  png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

void write_png(const std::filesystem::path& path, const RgbaImage& image) { write_file_atomic(path, encode_png(image)); }

}  // namespace forge
