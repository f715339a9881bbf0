// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace forge {

// Keeps large training buffers on the heap instead of fresh mmap pages each
// step. Idempotent; a no-op off glibc.
void tune_allocator();

}  // namespace forge
