// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "diffusion/text_embed.hpp"

#include "common/hash.hpp"

namespace forge {

std::vector<std::string> tokenize(std::string_view prompt) {
  std::vector<std::string> tokens;
  std::string cur;
  for (const char ch : prompt) {
    const auto c = static_cast<unsigned char>(ch);
    const bool word = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
    if (word) {
      cur += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : ch;
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

TextCondition embed_text(std::string_view prompt) {
  TextCondition cond;
  cond.prompt = std::string(prompt);
  for (const auto& tok : tokenize(prompt)) {
    const std::uint64_t h = fnv1a64(tok);
    const auto bucket = static_cast<Eigen::Index>(h % kConditionDim);
    cond.embedding[bucket] += (h >> 63) ? -1.0 : 1.0;
  }
  const double n = cond.embedding.norm();
  if (n > 0.0) cond.embedding /= n;
  return cond;
}

}  // namespace forge
