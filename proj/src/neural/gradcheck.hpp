// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>

namespace forge {

// Returns the loss at `params`; when `grad` is non-empty also writes the
// analytic gradient into it.
using LossFn = std::function<double(std::span<const double> params, std::span<double> grad)>;

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

// Central differences on `probes` coordinates drawn without replacement
// (all coordinates when probes >= size). Per-coordinate error is
// |a - n| / max(|a|, |n|, floor).
GradCheckResult finite_diff_check(const LossFn& loss, std::span<const double> params, std::size_t probes, double h,
                                  std::uint64_t seed, double floor = 1e-6);

}  // namespace forge
