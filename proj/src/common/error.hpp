// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace forge {

enum class Errc {
  InvalidArgument,
  Io,
  UnsupportedFormat,
  TruncatedFile,
  MalformedToken,
  NonFiniteCoordinate,
  IndexOutOfRange,
  MalformedFace,
  EmptyMesh,
  ZeroExtent,
  NoArea,
  EmptyCloud,
  ShapeMismatch,
  NonFiniteGradient,
  InvalidRange,
  EmptySet,
  EmptyReconstruction,
  EmptyCorpus,
  InvalidParams,
  TooFew,
  StaleCache,
  BadMagic,
  VersionUnsupported,
  ChecksumMismatch,
  UnknownModel,
  Timeout,
  Cancelled,
  Internal,
};

std::string_view errc_name(Errc code) noexcept;

// Errors the caller can fix by changing inputs, as opposed to internal faults.
bool is_user_error(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace forge
