// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "diffusion/schedule.hpp"

#include <cmath>

#include "common/error.hpp"

namespace forge {

NoiseSchedule make_schedule(int T, double beta_min, double beta_max) {
  if (T < 1) fail(Errc::InvalidRange, "schedule needs T >= 1");
  if (!(beta_min > 0.0) || !(beta_min <= beta_max) || !(beta_max < 1.0))
    fail(Errc::InvalidRange, "schedule needs 0 < beta_min <= beta_max < 1");
  NoiseSchedule s;
  s.steps = T;
  s.beta_min = beta_min;
  s.beta_max = beta_max;
  s.beta.resize(static_cast<std::size_t>(T));
  s.alpha_bar.resize(static_cast<std::size_t>(T) + 1);
  s.alpha_bar[0] = 1.0;
  for (int t = 1; t <= T; ++t) {
    const double b = T == 1 ? beta_min
                            : (t == T ? beta_max : beta_min + (beta_max - beta_min) * (t - 1) / (T - 1));
    s.beta[static_cast<std::size_t>(t - 1)] = b;
    s.alpha_bar[static_cast<std::size_t>(t)] = s.alpha_bar[static_cast<std::size_t>(t - 1)] * (1.0 - b);
  }
  return s;
}

Json NoiseSchedule::to_json() const {
  return {{"kind", "linear"}, {"T", steps}, {"beta_min", beta_min}, {"beta_max", beta_max}};
}

NoiseSchedule NoiseSchedule::from_json(const Json& j) {
  if (j.value("kind", std::string("linear")) != "linear") fail(Errc::InvalidRange, "only linear schedules exist");
  return make_schedule(j.value("T", 1000), j.value("beta_min", 1e-4), j.value("beta_max", 0.02));
}

Vec q_sample(const Vec& x0, int t, const Vec& eps, const NoiseSchedule& schedule) {
  if (t < 1 || t > schedule.steps) fail(Errc::InvalidRange, "timestep out of range");
  if (x0.size() != eps.size()) fail(Errc::ShapeMismatch, "q_sample: x0 and eps differ in size");
  const double ab = schedule.alpha_bar_at(t);
  return std::sqrt(ab) * x0 + std::sqrt(1.0 - ab) * eps;
}

std::vector<int> strided_timesteps(int steps, int T) {
  if (steps < 1 || steps > T) fail(Errc::InvalidRange, "sampling steps must be in [1, T]");
  std::vector<int> ts;
  ts.reserve(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const int t = steps == 1 ? T
                             : static_cast<int>(std::lround(T - static_cast<double>(T - 1) * i / (steps - 1)));
    if (ts.empty() || t < ts.back()) ts.push_back(t);
  }
  return ts;
}

}  // namespace forge
