// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <Eigen/Dense>

#include "adapter/loss.hpp"
#include "embedding/vector.hpp"

namespace dbrouter {

/// z = W e projection over frozen provider embeddings. Weights are kept
/// float-representable so the on-disk float32 payload round-trips exactly.
struct LinearAdapter {
  Eigen::MatrixXd weight;  // d_out x d_in
  double margin = 0.5;
  LossMode mode = LossMode::kDistanceStandard;
  std::uint64_t seed = 0;

  std::size_t d_in() const { return static_cast<std::size_t>(weight.cols()); }
  std::size_t d_out() const { return static_cast<std::size_t>(weight.rows()); }

  /// sha256 over dims, margin, mode and the float32 weight bytes.
  std::string digest() const;
  void validate() const;
};

/// Identity plus N(0, sigma) seeded noise, rounded to float.
LinearAdapter identity_adapter(std::size_t dim, std::uint64_t seed, double sigma = 1e-4, double margin = 0.5,
                               LossMode mode = LossMode::kDistanceStandard);

/// Rounds every weight to the nearest float.
void round_to_float(Eigen::MatrixXd& w);

/// Normalized W e.
EmbeddingVector apply_adapter(const LinearAdapter& adapter, const EmbeddingVector& v);

/// "DBRADP1\n", u32 header length, JSON header, float32 row-major weights.
void save_adapter(const LinearAdapter& adapter, const std::filesystem::path& path);
LinearAdapter load_adapter(const std::filesystem::path& path);

}  // namespace dbrouter
