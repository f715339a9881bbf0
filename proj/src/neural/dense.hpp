// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

#include <Eigen/Core>

namespace forge {

// Activations are stored feature-major: row f holds feature f for every
// example, so column n is example n.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;

// Y = W X + b with W row-major (out x in). Every output element is
// b[o] + sum_k W[o,k] X[k,n], accumulated with fused multiply-adds in
// ascending k, so a column's result does not depend on the rest of the batch.
void dense_forward(const double* W, const double* b, std::size_t out, std::size_t in, const Mat& X, Mat& Y);

// Accumulates dW += dY X^T and db += rowsum(dY); writes dX = W^T dY when
// `dX` is non-null.
void dense_backward(const double* W, std::size_t out, std::size_t in, const Mat& X, const Mat& dY, double* dW,
                    double* db, Mat* dX);

}  // namespace forge
