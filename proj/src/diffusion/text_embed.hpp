// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "neural/dense.hpp"

namespace forge {

inline constexpr int kConditionDim = 64;

struct TextCondition {
  Vec embedding = Vec::Zero(kConditionDim);  // unit norm, or zero for unconditional
  std::string prompt;
};

// Lowercased tokens split on anything that is not an ASCII letter or digit;
// bytes >= 0x80 count as token characters so UTF-8 words stay whole.
std::vector<std::string> tokenize(std::string_view prompt);

// Hashed bag of tokens: FNV-1a 64 of each token picks bucket h % 64 and sign
// from bit 63; the sum is L2-normalized.
TextCondition embed_text(std::string_view prompt);

}  // namespace forge
