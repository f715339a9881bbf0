// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "common/error.hpp"
#include "common/hash.hpp"
#include "common/rng.hpp"
#include "dataset/entry.hpp"

namespace forge {

namespace {

// Largest-remainder apportionment of `total` seats over real quotas; ties go
// to the lower index.
std::vector<std::size_t> apportion(const std::vector<double>& quotas, std::size_t total) {
  std::vector<std::size_t> seats(quotas.size());
  std::size_t given = 0;
  for (std::size_t i = 0; i < quotas.size(); ++i) {
    seats[i] = static_cast<std::size_t>(std::floor(quotas[i]));
    given += seats[i];
  }
  std::vector<std::size_t> order(quotas.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return quotas[a] - std::floor(quotas[a]) > quotas[b] - std::floor(quotas[b]);
  });
  for (std::size_t k = 0; given < total && k < order.size(); ++k, ++given) ++seats[order[k]];
  return seats;
}

}  // namespace

SplitAssignment make_split(const std::vector<DatasetEntry>& entries, std::uint64_t seed) {
  const std::size_t n = entries.size();
  if (n < 3) fail(Errc::TooFew, "a split needs at least 3 entries, got " + std::to_string(n));
  std::set<std::string> seen;
  std::map<std::string, std::vector<std::string>> by_category;
  for (const auto& e : entries) {
    if (!seen.insert(e.id).second) fail(Errc::InvalidArgument, "duplicate entry id '" + e.id + "'");
    by_category[e.category].push_back(e.id);
  }

  const std::size_t per_holdout = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(0.1 * n)));
  std::vector<std::string> names;
  std::vector<double> holdout_quota;
  for (auto& [category, ids] : by_category) {
    std::sort(ids.begin(), ids.end());
    Rng(derive_seed(seed, fnv1a64(category))).shuffle(ids.begin(), ids.end());
    names.push_back(category);
    holdout_quota.push_back(static_cast<double>(2 * per_holdout) * ids.size() / static_cast<double>(n));
  }
  const auto holdout = apportion(holdout_quota, 2 * per_holdout);
  std::vector<double> eval_quota;
  for (auto h : holdout) eval_quota.push_back(0.5 * static_cast<double>(h));
  const auto eval = apportion(eval_quota, per_holdout);

  SplitAssignment split;
  for (std::size_t c = 0; c < names.size(); ++c) {
    const auto& ids = by_category[names[c]];
    const std::size_t n_train = ids.size() - holdout[c];
    split.train.insert(split.train.end(), ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.eval.insert(split.eval.end(), ids.begin() + static_cast<std::ptrdiff_t>(n_train),
                      ids.begin() + static_cast<std::ptrdiff_t>(n_train + eval[c]));
    split.validation.insert(split.validation.end(), ids.begin() + static_cast<std::ptrdiff_t>(n_train + eval[c]),
                            ids.end());
  }
  return split;
}

}  // namespace forge
