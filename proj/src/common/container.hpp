// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "common/io.hpp"

namespace forge {

// Binary container shared by checkpoints and latent files:
//
//   "SMFG" | u32 version | u64 header length | JSON header | tensor data | u32 CRC32
//
// All integers and tensor values are little-endian; tensors are stored as f32.
// The header lists tensors as {name, dtype, shape, offset, count} with offsets
// in bytes relative to the start of the tensor data. The CRC covers the header
// and tensor data.
inline constexpr std::uint32_t kContainerVersion = 1;

struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> values;
};

struct Container {
  Json meta = Json::object();
  std::vector<std::pair<std::string, Tensor>> tensors;

  void add(std::string name, std::vector<double> values,
           std::vector<std::size_t> shape = {});
  const Tensor& tensor(std::string_view name) const;
  bool has(std::string_view name) const;
};

std::string encode_container(const Container& c);
Container decode_container(std::string_view bytes);

void write_container(const std::filesystem::path& path, const Container& c);
Container read_container(const std::filesystem::path& path);

}  // namespace forge
