// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "common/container.hpp"

#include <bit>
#include <cmath>
#include <cstring>

#include <zlib.h>

#include "common/error.hpp"

namespace forge {

static_assert(std::endian::native == std::endian::little,
              "container encoding assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'S', 'M', 'F', 'G'};
constexpr std::size_t kPrefixSize = 4 + 4 + 8;

template <class T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

template <class T>
T get(std::string_view in, std::size_t at) {
  T v;
  std::memcpy(&v, in.data() + at, sizeof(T));
  return v;
}

std::uint32_t crc32_of(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  std::size_t at = 0;
  while (at < bytes.size()) {
    const std::size_t n = std::min<std::size_t>(bytes.size() - at, 1u << 30);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data() + at), static_cast<uInt>(n));
    at += n;
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

void Container::add(std::string name, std::vector<double> values, std::vector<std::size_t> shape) {
  if (shape.empty()) shape = {values.size()};
  std::size_t count = 1;
  for (auto d : shape) count *= d;
  if (count != values.size()) fail(Errc::ShapeMismatch, "tensor '" + name + "': shape does not match value count");
  tensors.emplace_back(std::move(name), Tensor{std::move(shape), std::move(values)});
}

const Tensor& Container::tensor(std::string_view name) const {
  for (const auto& [n, t] : tensors)
    if (n == name) return t;
  fail(Errc::InvalidArgument, "container has no tensor '" + std::string(name) + "'");
}

bool Container::has(std::string_view name) const {
  for (const auto& [n, t] : tensors)
    if (n == name) return true;
  return false;
}

std::string encode_container(const Container& c) {
  Json header = c.meta;
  Json directory = Json::array();
  std::string data;
  for (const auto& [name, t] : c.tensors) {
    directory.push_back({{"name", name},
                         {"dtype", "f32"},
                         {"shape", t.shape},
                         {"offset", data.size()},
                         {"count", t.values.size()}});
    for (double v : t.values) {
      if (!std::isfinite(v)) fail(Errc::InvalidArgument, "tensor '" + name + "' has non-finite values");
      put(data, static_cast<float>(v));
    }
  }
  header["tensors"] = std::move(directory);
  const std::string header_text = header.dump();

  std::string out;
  out.reserve(kPrefixSize + header_text.size() + data.size() + 4);
  out.append(kMagic, 4);
  put(out, kContainerVersion);
  put(out, static_cast<std::uint64_t>(header_text.size()));
  out += header_text;
  out += data;
  put(out, crc32_of(std::string_view(out).substr(kPrefixSize)));
  return out;
}

Container decode_container(std::string_view bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    fail(Errc::BadMagic, "not a forge container (bad magic)");
  if (bytes.size() < kPrefixSize + 4) fail(Errc::ChecksumMismatch, "container truncated");
  const auto version = get<std::uint32_t>(bytes, 4);
  if (version != kContainerVersion)
    fail(Errc::VersionUnsupported, "container version " + std::to_string(version) + " is not supported");
  const auto header_len = get<std::uint64_t>(bytes, 8);
  if (header_len > bytes.size() - kPrefixSize - 4) fail(Errc::ChecksumMismatch, "container truncated");

  const std::string_view body = bytes.substr(kPrefixSize, bytes.size() - kPrefixSize - 4);
  if (crc32_of(body) != get<std::uint32_t>(bytes, bytes.size() - 4))
    fail(Errc::ChecksumMismatch, "container checksum mismatch");

  Container c;
  try {
    c.meta = Json::parse(body.substr(0, header_len));
  } catch (const Json::exception& e) {
    fail(Errc::ChecksumMismatch, std::string("container header unreadable: ") + e.what());
  }
  const std::string_view data = body.substr(header_len);
  try {
    for (const auto& entry : c.meta.at("tensors")) {
      if (entry.at("dtype") != "f32") fail(Errc::VersionUnsupported, "unsupported tensor dtype");
      const auto offset = entry.at("offset").get<std::size_t>();
      const auto count = entry.at("count").get<std::size_t>();
      if (offset > data.size() || count > (data.size() - offset) / 4)
        fail(Errc::ChecksumMismatch, "tensor extends past end of data");
      Tensor t;
      t.shape = entry.at("shape").get<std::vector<std::size_t>>();
      t.values.resize(count);
      for (std::size_t i = 0; i < count; ++i) t.values[i] = get<float>(data, offset + 4 * i);
      c.tensors.emplace_back(entry.at("name").get<std::string>(), std::move(t));
    }
  } catch (const Json::exception& e) {
    fail(Errc::ChecksumMismatch, std::string("container tensor directory invalid: ") + e.what());
  }
  c.meta.erase("tensors");
  return c;
}

void write_container(const std::filesystem::path& path, const Container& c) {
  write_file_atomic(path, encode_container(c));
}

Container read_container(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  try {
    return decode_container(bytes);
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace forge
