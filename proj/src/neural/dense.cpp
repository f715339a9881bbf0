// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "neural/dense.hpp"

#include <cmath>

#include "common/error.hpp"

namespace forge {

namespace {

constexpr std::size_t kCols = 8;
constexpr std::size_t kRows = 4;

}  // namespace

void dense_forward(const double* W, const double* b, std::size_t out, std::size_t in, const Mat& X, Mat& Y) {
  if (static_cast<std::size_t>(X.rows()) != in) fail(Errc::ShapeMismatch, "dense_forward: input width mismatch");
  const std::size_t batch = static_cast<std::size_t>(X.cols());
  Y.resize(static_cast<Eigen::Index>(out), X.cols());
  const double* __restrict x = X.data();
  double* __restrict y = Y.data();

  std::size_t n = 0;
  for (; n + kCols <= batch; n += kCols) {
    std::size_t o = 0;
    for (; o + kRows <= out; o += kRows) {
      double acc[kRows][kCols];
      for (std::size_t i = 0; i < kRows; ++i)
        for (std::size_t j = 0; j < kCols; ++j) acc[i][j] = b[o + i];
      const double* w0 = W + o * in;
      for (std::size_t k = 0; k < in; ++k) {
        double xv[kCols];
        for (std::size_t j = 0; j < kCols; ++j) xv[j] = x[k * batch + n + j];
        for (std::size_t i = 0; i < kRows; ++i) {
          const double w = w0[i * in + k];
          for (std::size_t j = 0; j < kCols; ++j) acc[i][j] = std::fma(w, xv[j], acc[i][j]);
        }
      }
      for (std::size_t i = 0; i < kRows; ++i)
        for (std::size_t j = 0; j < kCols; ++j) y[(o + i) * batch + n + j] = acc[i][j];
    }
    for (; o < out; ++o) {
      double acc[kCols];
      for (std::size_t j = 0; j < kCols; ++j) acc[j] = b[o];
      for (std::size_t k = 0; k < in; ++k) {
        const double w = W[o * in + k];
        const double* xr = x + k * batch + n;
        for (std::size_t j = 0; j < kCols; ++j) acc[j] = std::fma(w, xr[j], acc[j]);
      }
      for (std::size_t j = 0; j < kCols; ++j) y[o * batch + n + j] = acc[j];
    }
  }
  for (; n < batch; ++n)
    for (std::size_t o = 0; o < out; ++o) {
      double acc = b[o];
      for (std::size_t k = 0; k < in; ++k) acc = std::fma(W[o * in + k], x[k * batch + n], acc);
      y[o * batch + n] = acc;
    }
}

void dense_backward(const double* W, std::size_t out, std::size_t in, const Mat& X, const Mat& dY, double* dW,
                    double* db, Mat* dX) {
  if (static_cast<std::size_t>(X.rows()) != in || static_cast<std::size_t>(dY.rows()) != out || X.cols() != dY.cols())
    fail(Errc::ShapeMismatch, "dense_backward: shape mismatch");
  const auto o = static_cast<Eigen::Index>(out), i = static_cast<Eigen::Index>(in);
  Eigen::Map<Mat> gW(dW, o, i);
  gW.noalias() += dY * X.transpose();
  Eigen::Map<Vec> gb(db, o);
  gb += dY.rowwise().sum();
  if (dX) {
    Eigen::Map<const Mat> w(W, o, i);
    dX->noalias() = w.transpose() * dY;
  }
}

}  // namespace forge
