// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "eval/report.hpp"
#include "synth/splits.hpp"

namespace dbrouter {

enum class Protocol { kSubsetScaling, kClusterMatchedSampling, kMetadataAblation, kInVsCross };

std::string_view to_string(Protocol p);
Protocol parse_protocol(std::string_view s);

struct ExperimentSpec {
  Protocol protocol = Protocol::kInVsCross;
  EvalOptions eval;
  std::uint64_t seed = 0;
  /// subset-scaling: repository sizes, reported largest first.
  std::vector<std::size_t> sizes;
  /// cluster-matched-sampling: number of in-domain sets.
  std::size_t n_sets = 7;
};

struct ExperimentResult {
  Protocol protocol;
  std::vector<LabeledReport> cells;
  /// DB sets used per cell, for audit (empty when the scope is a split).
  std::vector<std::vector<std::string>> scopes;
};

/// Protocols over a split dataset:
///   subset-scaling           test_in + test_out over nested random subsets of
///                            train_dbs + out_dbs; questions restricted to the subset
///   cluster-matched-sampling n_sets disjoint in-domain sets whose cluster size
///                            profile matches out_dbs, averaged; plus test_out
///   metadata-ablation        test_out with and without statement retrieval
///   in-vs-cross              test_in over in-domain DBs, test_out over out_dbs
ExperimentResult run_experiment(const ExperimentSpec& spec, const Router& router, const Reranker* reranker,
                                const RoutingDataset& dataset);

/// Mean of per-set percentages; n is the total question count.
MetricsReport average_reports(const std::vector<MetricsReport>& reports);

}  // namespace dbrouter
