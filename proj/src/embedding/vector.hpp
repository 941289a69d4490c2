// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

namespace dbrouter {

struct EmbeddingVector {
  std::vector<float> values;
  bool normalized = false;

  std::size_t dim() const { return values.size(); }
  bool operator==(const EmbeddingVector&) const = default;
};

/// Unit-length copy. Throws kNumeric for an all-zero or non-finite input.
EmbeddingVector normalized(std::span<const float> values);
EmbeddingVector normalized(std::span<const double> values);

/// dot(a, b) / (|a| |b|), accumulated in double and clamped to [-1, 1].
/// Throws kInvalidArgument on a dimension mismatch and kNumeric on a zero
/// vector.
double cosine(std::span<const float> a, std::span<const float> b);
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

}  // namespace dbrouter
