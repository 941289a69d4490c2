// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "retrieval/scoring.hpp"
#include "schema/clusters.hpp"

namespace dbrouter {

/// 1 iff gold is among the first k entries.
int recall_at_k(const RankedList& ranked, const std::string& gold, std::size_t k);

/// 1 / rank of gold; 0 when gold is absent.
double average_precision(const RankedList& ranked, const std::string& gold);

/// (within, across) Recall@1 of the top entry:
///   top = gold              -> (1, 1)
///   same cluster as gold    -> (0, 1)
///   different cluster       -> (1, 0)
std::pair<int, int> vertical_r1(const RankedList& ranked, const std::string& gold, const VerticalClusters& clusters);

/// Cluster-level Recall@k and 1/i for the first entry in gold's cluster.
/// ap is 0 when no entry shares gold's cluster.
std::pair<int, double> across_vertical_rk_map(const RankedList& ranked, const std::string& gold,
                                              const VerticalClusters& clusters, std::size_t k);

struct QuestionRow {
  std::string question_id;
  std::string gold;
  std::vector<std::string> top;  // first three predictions
  std::size_t gold_rank = 0;     // 0 when absent
  int r1 = 0;
  int r3 = 0;
  double ap = 0.0;
  std::optional<int> within_r1;
  std::optional<int> across_r1;
  std::optional<int> across_r3;
  std::optional<double> across_ap;
};

/// Scores one ranked list; vertical fields only when `clusters` is given.
QuestionRow score_question(const RankedList& ranked, const std::string& gold, const VerticalClusters* clusters);

struct OverallMetrics {
  double r1 = 0.0;
  double r3 = 0.0;
  double map = 0.0;
};

struct MetricsReport {
  std::size_t n = 0;
  OverallMetrics overall;                 // percentages
  std::optional<double> within_r1;        // percentage
  std::optional<OverallMetrics> across;   // percentages
  std::vector<QuestionRow> rows;
  std::vector<std::string> warnings;
};

/// Means x 100. Vertical columns are present only when every row carries
/// them and `suppress_vertical` is false.
MetricsReport aggregate(std::vector<QuestionRow> rows, bool suppress_vertical = false);

/// Rounds a percentage to 2 decimals for display.
double display2(double pct);

}  // namespace dbrouter
