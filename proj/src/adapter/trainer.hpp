// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "adapter/adapter.hpp"
#include "embedding/embedder.hpp"
#include "synth/pairs.hpp"

namespace dbrouter {

struct TrainConfig {
  std::size_t batch_size = 16;
  double learning_rate = 5e-6;
  std::size_t epochs = 2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;
  LossMode loss_mode = LossMode::kDistanceStandard;
  double margin = 0.5;
  double init_sigma = 1e-4;

  void validate() const;
};

struct EmbeddedPair {
  Eigen::VectorXd a;
  Eigen::VectorXd b;
  int label = 0;
};

struct TrainingLog {
  /// Mean loss over the mini-batches of each epoch.
  std::vector<double> epoch_mean_loss;
  /// Mean loss over all pairs after each epoch; drives snapshot selection.
  std::vector<double> post_epoch_loss;
  /// 1-based epoch of the returned snapshot; 0 means the initial weights.
  std::size_t selected_epoch = 0;
  std::size_t steps = 0;
};

struct TrainResult {
  LinearAdapter adapter;
  TrainingLog log;
};

/// Mean contrastive loss of `pairs` under weight `w`.
double mean_loss(const Eigen::MatrixXd& w, const std::vector<EmbeddedPair>& pairs, double margin, LossMode mode);

/// Mini-batch Adam over seeded shuffles. Aborts with kNumeric on a
/// non-finite loss, naming the step.
TrainResult train_adapter(const std::vector<EmbeddedPair>& pairs, const TrainConfig& cfg);

/// Embeds both sides of every pair through `embedder`, then trains.
TrainResult train_adapter(const std::vector<PairExample>& pairs, Embedder& embedder, const TrainConfig& cfg);

}  // namespace dbrouter
