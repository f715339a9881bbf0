// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "diffusion/objective.hpp"

namespace forge {

struct SampleOptions {
  int steps = 0;  // 0 means the full schedule
  // Polled once per step; returning true aborts with Errc::Cancelled.
  std::function<bool()> cancelled;
};

// Ancestral x0-parameterized sampling over strided timesteps. Column b uses
// its own stream seeded from seeds[b], so a column's result does not depend
// on the rest of the batch. Returns standardized latents (D x B).
Mat sample_batch(const DenoiseFn& denoise, int latent_dim, const NoiseSchedule& schedule, const Mat& cond,
                 std::span<const std::uint64_t> seeds, const SampleOptions& options = {});

// Single sample, de-standardized with `stats`.
Vec sample(const DenoiseFn& denoise, const NoiseSchedule& schedule, const TextCondition& cond, const LatentStats& stats,
           std::uint64_t seed, const SampleOptions& options = {});

}  // namespace forge
