// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "diffusion/sampler.hpp"

#include <cmath>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace forge {

Mat sample_batch(const DenoiseFn& denoise, int latent_dim, const NoiseSchedule& schedule, const Mat& cond,
                 std::span<const std::uint64_t> seeds, const SampleOptions& options) {
  const auto B = static_cast<Eigen::Index>(seeds.size());
  if (cond.rows() != kConditionDim || cond.cols() != B) fail(Errc::ShapeMismatch, "one condition per seed expected");
  const std::vector<int> ts = strided_timesteps(options.steps > 0 ? options.steps : schedule.steps, schedule.steps);

  std::vector<Rng> rngs;
  rngs.reserve(seeds.size());
  for (auto s : seeds) rngs.emplace_back(derive_seed(s, 0x73616d706c65ULL));
  Mat x(latent_dim, B);
  for (Eigen::Index b = 0; b < B; ++b)
    for (int r = 0; r < latent_dim; ++r) x(r, b) = rngs[static_cast<std::size_t>(b)].normal();

  std::vector<int> tcol(static_cast<std::size_t>(B));
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (options.cancelled && options.cancelled()) fail(Errc::Cancelled, "sampling cancelled");
    const int t = ts[i];
    const int s = i + 1 < ts.size() ? ts[i + 1] : 0;
    std::fill(tcol.begin(), tcol.end(), t);
    const Mat x0 = denoise(x, tcol, cond);
    const double ab_t = schedule.alpha_bar_at(t);
    const double ab_s = schedule.alpha_bar_at(s);
    // effective one-step quantities for the t -> s jump
    const double alpha = ab_t / ab_s;
    const double beta = 1.0 - alpha;
    const double c0 = std::sqrt(ab_s) * beta / (1.0 - ab_t);
    const double ct = std::sqrt(alpha) * (1.0 - ab_s) / (1.0 - ab_t);
    const double sigma = std::sqrt((1.0 - ab_s) / (1.0 - ab_t) * beta);
    Mat next = c0 * x0 + ct * x;
    if (s > 0)
      for (Eigen::Index b = 0; b < B; ++b)
        for (int r = 0; r < latent_dim; ++r) next(r, b) += sigma * rngs[static_cast<std::size_t>(b)].normal();
    x.swap(next);
  }
  return x;
}

Vec sample(const DenoiseFn& denoise, const NoiseSchedule& schedule, const TextCondition& cond, const LatentStats& stats,
           std::uint64_t seed, const SampleOptions& options) {
  Mat c(kConditionDim, 1);
  c.col(0) = cond.embedding;
  const std::uint64_t seeds[1] = {seed};
  const Mat z = sample_batch(denoise, static_cast<int>(stats.mean.size()), schedule, c, seeds, options);
  return stats.destandardize(Vec(z.col(0)));
}

}  // namespace forge
