// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "eval/metrics.hpp"
#include "rerank/reranker.hpp"
#include "retrieval/router.hpp"
#include "schema/clusters.hpp"

namespace dbrouter {

struct EvalOptions {
  RankOptions rank;
  Strategy rerank_base = Strategy::kPooledTables;
  const VerticalClusters* clusters = nullptr;
};

/// Routes every question over `opts.rank.scope` (all indexed DBs when
/// empty) and aggregates. Vertical columns are suppressed without
/// clusters or when every DB in scope is its own cluster.
MetricsReport evaluate(const Router& router, const Reranker* reranker,
                       const std::vector<const RoutingSample*>& questions, const EvalOptions& opts);

struct LabeledReport {
  std::string label;
  MetricsReport report;
};

/// Summary plus per-question rows. Percentages are rounded to 2 decimals.
std::string report_json(const std::string& title, const std::string& strategy,
                        const std::vector<LabeledReport>& reports, std::size_t incidents = 0);

/// Header + one line per labeled report.
std::string report_csv(const std::vector<LabeledReport>& reports);

}  // namespace dbrouter
