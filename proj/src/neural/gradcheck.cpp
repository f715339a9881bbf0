// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "neural/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "common/rng.hpp"

namespace forge {

GradCheckResult finite_diff_check(const LossFn& loss, std::span<const double> params, std::size_t probes, double h,
                                  std::uint64_t seed, double floor) {
  const std::size_t n = params.size();
  std::vector<double> grad(n, 0.0);
  loss(params, grad);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order.begin(), order.end());
  order.resize(std::min(probes, n));

  std::vector<double> p(params.begin(), params.end());
  GradCheckResult result;
  for (std::size_t idx : order) {
    const double saved = p[idx];
    p[idx] = saved + h;
    const double up = loss(p, {});
    p[idx] = saved - h;
    const double down = loss(p, {});
    p[idx] = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double analytic = grad[idx];
    const double err = std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
    if (err > result.max_relative_error || (result.max_relative_error == 0.0 && idx == order.front())) {
      result.max_relative_error = err;
      result.worst_index = idx;
      result.analytic = analytic;
      result.numeric = numeric;
    }
  }
  return result;
}

}  // namespace forge
