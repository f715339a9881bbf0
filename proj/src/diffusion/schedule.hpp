// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "common/io.hpp"
#include "neural/dense.hpp"

namespace forge {

// Linear beta schedule over t = 1..T; index 0 of alpha_bar is the t = 0 value 1.
struct NoiseSchedule {
  int steps = 0;  // T
  double beta_min = 0.0;
  double beta_max = 0.0;
  std::vector<double> beta;       // [t - 1]
  std::vector<double> alpha_bar;  // [t], alpha_bar[0] = 1

  double beta_at(int t) const { return beta[static_cast<std::size_t>(t - 1)]; }
  double alpha_at(int t) const { return 1.0 - beta_at(t); }
  double alpha_bar_at(int t) const { return alpha_bar[static_cast<std::size_t>(t)]; }

  Json to_json() const;
  static NoiseSchedule from_json(const Json& j);
};

// beta_t = beta_min + (beta_max - beta_min) (t - 1) / (T - 1); T = 1 gives beta_min.
NoiseSchedule make_schedule(int T = 1000, double beta_min = 1e-4, double beta_max = 0.02);

// x_t = sqrt(alpha_bar_t) x0 + sqrt(1 - alpha_bar_t) eps, column-wise.
Vec q_sample(const Vec& x0, int t, const Vec& eps, const NoiseSchedule& schedule);

// `steps` timesteps evenly spaced over [1, T], descending, always including T
// and (for steps >= 2) 1.
std::vector<int> strided_timesteps(int steps, int T);

}  // namespace forge
