// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include "geometry/types.hpp"

namespace forge {

// 8-bit RGBA PNG; channels clamped to [0, 1] and rounded.
std::string encode_png(const RgbaImage& image);
void write_png(const std::filesystem::path& path, const RgbaImage& image);

}  // namespace forge
