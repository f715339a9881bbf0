// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "common/error.hpp"

namespace forge {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Io: return "Io";
    case Errc::UnsupportedFormat: return "UnsupportedFormat";
    case Errc::TruncatedFile: return "TruncatedFile";
    case Errc::MalformedToken: return "MalformedToken";
    case Errc::NonFiniteCoordinate: return "NonFiniteCoordinate";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::MalformedFace: return "MalformedFace";
    case Errc::EmptyMesh: return "EmptyMesh";
    case Errc::ZeroExtent: return "ZeroExtent";
    case Errc::NoArea: return "NoArea";
    case Errc::EmptyCloud: return "EmptyCloud";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::NonFiniteGradient: return "NonFiniteGradient";
    case Errc::InvalidRange: return "InvalidRange";
    case Errc::EmptySet: return "EmptySet";
    case Errc::EmptyReconstruction: return "EmptyReconstruction";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::TooFew: return "TooFew";
    case Errc::StaleCache: return "StaleCache";
    case Errc::BadMagic: return "BadMagic";
    case Errc::VersionUnsupported: return "VersionUnsupported";
    case Errc::ChecksumMismatch: return "ChecksumMismatch";
    case Errc::UnknownModel: return "UnknownModel";
    case Errc::Timeout: return "Timeout";
    case Errc::Cancelled: return "Cancelled";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

bool is_user_error(Errc code) noexcept {
  switch (code) {
    case Errc::Internal:
    case Errc::NonFiniteGradient:
    case Errc::Cancelled:
      return false;
    default:
      return true;
  }
}

}  // namespace forge
