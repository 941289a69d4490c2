// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "embedding/vector.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"

namespace dbrouter {

namespace {

template <typename T>
EmbeddingVector normalize_impl(std::span<const T> values) {
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "empty embedding");
  double sq = 0.0;
  for (T v : values) {
    if (!std::isfinite(static_cast<double>(v))) throw Error(ErrorCode::kNumeric, "non-finite embedding value");
    sq += static_cast<double>(v) * static_cast<double>(v);
  }
  if (sq == 0.0) throw Error(ErrorCode::kNumeric, "cannot normalize a zero vector");
  const double inv = 1.0 / std::sqrt(sq);
  EmbeddingVector out;
  out.values.reserve(values.size());
  for (T v : values) out.values.push_back(static_cast<float>(static_cast<double>(v) * inv));
  out.normalized = true;
  return out;
}

}  // namespace

EmbeddingVector normalized(std::span<const float> values) { return normalize_impl(values); }
EmbeddingVector normalized(std::span<const double> values) { return normalize_impl(values); }

double cosine(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kInvalidArgument, "cosine of vectors with dims " + std::to_string(a.size()) +
                                                 " and " + std::to_string(b.size()));
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i];
    const double y = b[i];
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::kNumeric, "cosine with a zero vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) { return cosine(a.values, b.values); }

}  // namespace dbrouter
