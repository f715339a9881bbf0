// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "neural/adam.hpp"

#include <cmath>
#include <string>

#include "common/error.hpp"

namespace forge {

void adam_step(AdamState& state, std::span<double> params, std::span<const double> grad) {
  const std::size_t n = params.size();
  if (grad.size() != n) fail(Errc::ShapeMismatch, "adam_step: gradient length mismatch");
  if (state.m.empty() && state.v.empty()) {
    state.m.assign(n, 0.0);
    state.v.assign(n, 0.0);
  }
  if (state.m.size() != n || state.v.size() != n) fail(Errc::ShapeMismatch, "adam_step: moment length mismatch");
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(grad[i]))
      fail(Errc::NonFiniteGradient, "non-finite gradient at coordinate " + std::to_string(i));

  ++state.step;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < n; ++i) {
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grad[i];
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grad[i] * grad[i];
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    params[i] -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps);
  }
}

}  // namespace forge
